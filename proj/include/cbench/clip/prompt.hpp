#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cbench::clip {

/// Default prompt template; {class} and {modality} are substituted.
inline constexpr const char* kDefaultTemplate =
    "a photo of a {class}, a {modality} image";

/// Frozen per-class unit embeddings, keyed by the full prompt string. This
/// is the text branch at desk scale: fixed, reproducible vectors that never
/// receive gradient.
struct PromptTable {
    int embed_dim = 0;
    std::string prompt_template;
    std::string modality;
    std::uint64_t seed = 0;
    std::vector<std::string> prompts;            // index = label id
    std::vector<std::vector<double>> vectors;    // unit norm each

    std::size_t num_classes() const { return vectors.size(); }
    std::uint64_t checksum() const;
};

std::string render_prompt(const std::string& template_str,
                          const std::string& class_name,
                          const std::string& modality);

/// Deterministic unit vectors per class. Throws DataError on empty or
/// duplicate class names.
PromptTable prompt_embeddings(std::span<const std::string> class_names,
                              const std::string& modality,
                              const std::string& template_str,
                              std::uint64_t seed, int embed_dim);

/// Cosine similarity of an embedding against every class vector.
std::vector<double> similarity(std::span<const double> f_v, const PromptTable& table);

} // namespace cbench::clip
