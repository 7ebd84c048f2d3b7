#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "cbench/image.hpp"

namespace cbench {

enum class CorruptionKind {
    gaussian_noise,
    impulse_noise,
    motion_blur,
    zoom_blur,
    brightness,
    contrast,
    pixelate,
    block_jpeg, // opt-in; not part of the seven benchmark kinds
};

/// The seven benchmark kinds, in reporting order.
constexpr std::array<CorruptionKind, 7> kBenchmarkKinds = {
    CorruptionKind::gaussian_noise, CorruptionKind::impulse_noise,
    CorruptionKind::motion_blur,    CorruptionKind::zoom_blur,
    CorruptionKind::brightness,     CorruptionKind::contrast,
    CorruptionKind::pixelate,
};

const char* kind_name(CorruptionKind kind);
std::optional<CorruptionKind> kind_from_name(std::string_view name);

/// Fully determines one corrupted output.
struct CorruptionSpec {
    CorruptionKind kind;
    int severity = 1; // 1..5
    std::uint64_t seed = 0;
};

/// Severity parameter tables, versioned as one constant and printed by the
/// CLI. Index 0 holds severity 1.
struct SeverityTables {
    static constexpr int version = 1;
    static constexpr std::array<double, 5> gaussian_sigma = {0.08, 0.12, 0.18, 0.26, 0.38};
    static constexpr std::array<double, 5> impulse_fraction = {0.03, 0.06, 0.09, 0.17, 0.27};
    static constexpr std::array<int, 5> motion_length = {7, 9, 13, 17, 21};
    static constexpr std::array<double, 5> zoom_max = {1.11, 1.16, 1.21, 1.26, 1.31};
    static constexpr std::array<double, 5> brightness_delta = {0.1, 0.2, 0.3, 0.4, 0.5};
    static constexpr std::array<double, 5> contrast_scale = {0.4, 0.3, 0.2, 0.1, 0.05};
    static constexpr std::array<double, 5> pixelate_fraction = {0.6, 0.5, 0.4, 0.3, 0.25};
    static constexpr std::array<int, 5> jpeg_quality = {25, 18, 15, 10, 7};
};

// Every kernel is a pure function: same (img, severity, seed) gives a
// bitwise-identical output regardless of call order or thread count.
// Outputs keep the input shape and stay inside [0,1].

ImageBuffer apply_gaussian_noise(const ImageBuffer& img, int severity, std::uint64_t seed);
ImageBuffer apply_impulse_noise(const ImageBuffer& img, int severity, std::uint64_t seed);
ImageBuffer apply_motion_blur(const ImageBuffer& img, int severity, std::uint64_t seed);
ImageBuffer apply_zoom_blur(const ImageBuffer& img, int severity, std::uint64_t seed);
ImageBuffer apply_brightness(const ImageBuffer& img, int severity, std::uint64_t seed);
ImageBuffer apply_contrast(const ImageBuffer& img, int severity, std::uint64_t seed);
ImageBuffer apply_pixelate(const ImageBuffer& img, int severity, std::uint64_t seed);
ImageBuffer apply_block_jpeg(const ImageBuffer& img, int severity, std::uint64_t seed);

/// Number of re-zoom terms averaged by zoom blur: 1.00 step 0.01 up to the
/// severity's z_max, original included.
int zoom_term_count(int severity);

/// Quality-parameterized core of the block compression kernel (1..100);
/// at quality 100 every quantization step is 1.
ImageBuffer apply_block_jpeg_quality(const ImageBuffer& img, int quality);

/// Dispatches on spec.kind. Throws DataError on an out-of-range severity.
ImageBuffer apply_corruption(const ImageBuffer& img, const CorruptionSpec& spec);

} // namespace cbench
