#pragma once

#include <filesystem>
#include <string>

#include "cbench/clip/encoder.hpp"
#include "cbench/clip/prompt.hpp"

namespace cbench::clip {

/// Everything needed to reproduce inference: the encoder (base weights plus
/// adapters) and the parameters that regenerate the frozen prompt table.
struct WeightsFile {
    VisualEncoder encoder;
    std::string prompt_template = kDefaultTemplate;
    std::uint64_t prompt_seed = 0;
};

/// Binary container, version 1: magic "CBWF", little-endian scalars, a JSON
/// config header and named float64 tensors. Format details in the README.
void save_weights(const WeightsFile& w, const std::filesystem::path& path);
WeightsFile load_weights(const std::filesystem::path& path);

} // namespace cbench::clip
