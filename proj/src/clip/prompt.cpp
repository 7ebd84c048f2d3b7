#include "cbench/clip/prompt.hpp"

#include <unordered_set>

#include "cbench/clip/tensor.hpp"
#include "cbench/error.hpp"
#include "cbench/rng.hpp"

namespace cbench::clip {

std::uint64_t PromptTable::checksum() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ull;
        }
    };
    for (const auto& prompt : prompts) mix(prompt.data(), prompt.size());
    for (const auto& vec : vectors) mix(vec.data(), vec.size() * sizeof(double));
    return h;
}

std::string render_prompt(const std::string& template_str,
                          const std::string& class_name,
                          const std::string& modality) {
    std::string out = template_str;
    auto replace_all = [&out](const std::string& token, const std::string& value) {
        for (std::size_t pos = out.find(token); pos != std::string::npos;
             pos = out.find(token, pos + value.size()))
            out.replace(pos, token.size(), value);
    };
    replace_all("{class}", class_name);
    replace_all("{modality}", modality);
    return out;
}

PromptTable prompt_embeddings(std::span<const std::string> class_names,
                              const std::string& modality,
                              const std::string& template_str,
                              std::uint64_t seed, int embed_dim) {
    if (class_names.empty()) throw DataError("prompt table needs at least one class");
    if (embed_dim <= 0) throw DataError("embed_dim must be positive");
    std::unordered_set<std::string> seen;
    for (const auto& name : class_names)
        if (!seen.insert(name).second)
            throw DataError("duplicate class name \"" + name + "\"");

    PromptTable table;
    table.embed_dim = embed_dim;
    table.prompt_template = template_str;
    table.modality = modality;
    table.seed = seed;
    for (const auto& name : class_names) {
        std::string prompt = render_prompt(template_str, name, modality);
        std::string key = std::to_string(seed) + "/prompt/" + prompt;
        CounterRng rng(fnv1a64(key.data(), key.size()));
        std::vector<double> vec(embed_dim);
        for (int j = 0; j < embed_dim; ++j) vec[j] = rng.normal(j);
        double norm = l2_norm(vec);
        if (norm == 0.0) throw DataError("degenerate prompt vector");
        for (double& v : vec) v /= norm;
        table.prompts.push_back(std::move(prompt));
        table.vectors.push_back(std::move(vec));
    }
    return table;
}

std::vector<double> similarity(std::span<const double> f_v, const PromptTable& table) {
    if (static_cast<int>(f_v.size()) != table.embed_dim)
        throw DataError("embedding dimension does not match prompt table");
    double fn = l2_norm(f_v);
    if (fn == 0.0) throw DataError("zero-norm embedding");
    std::vector<double> scores(table.num_classes());
    for (std::size_t c = 0; c < table.num_classes(); ++c) {
        double tn = l2_norm(table.vectors[c]);
        scores[c] = dot(f_v, table.vectors[c]) / (fn * tn);
    }
    return scores;
}

} // namespace cbench::clip
