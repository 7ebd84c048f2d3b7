#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "cbench/corruptions.hpp"
#include "cbench/manifest.hpp"

namespace cbench {

/// Index of one generated benchmark: (dataset, kind, severity) -> derived
/// manifest path. Serialized as layout.json at the benchmark root.
struct BenchmarkLayout {
    std::filesystem::path root;
    std::map<std::tuple<std::string, CorruptionKind, int>, std::filesystem::path> entries;
};

struct BenchmarkOptions {
    std::uint64_t global_seed = 0;
    int workers = 1;
    std::vector<CorruptionKind> kinds{kBenchmarkKinds.begin(), kBenchmarkKinds.end()};
    std::vector<int> severities{1, 2, 3, 4, 5};
    bool keep_going = false; // continue with remaining datasets after a failure
    std::function<void(const std::string&)> log; // optional progress sink
};

/// Stable per-item seed: FNV-1a 64 over
/// "<global_seed>|<dataset>|<kind>|<severity>|<item_id>" so outputs are
/// independent of scheduling and processing order.
std::uint64_t derive_item_seed(std::uint64_t global_seed, std::string_view dataset,
                               CorruptionKind kind, int severity,
                               std::string_view item_id);

/// Corrupts every item of every manifest at each (kind, severity), writing
/// PNGs and derived manifests under out_root/{dataset}/{kind}/{severity}/.
/// Source images are never modified. The output tree is a pure function of
/// (manifests, severity tables, global_seed).
BenchmarkLayout build_benchmark(const std::vector<DatasetManifest>& manifests,
                                const std::filesystem::path& out_root,
                                const BenchmarkOptions& options);

void save_layout(const BenchmarkLayout& layout, const std::filesystem::path& path);
BenchmarkLayout load_layout(const std::filesystem::path& path);

} // namespace cbench
