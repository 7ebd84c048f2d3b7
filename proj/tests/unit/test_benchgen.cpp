#include <doctest.h>

#include <fstream>
#include <set>

#include "cbench/benchgen.hpp"
#include "cbench/error.hpp"
#include "synthetic.hpp"
#include "test_util.hpp"

using namespace cbench;
namespace ts = cbench::testsupport;
namespace fs = std::filesystem;

namespace {

// independent FNV-1a oracle, written out long-hand
std::uint64_t fnv_oracle(const std::string& s) {
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char ch : s) {
        hash = hash ^ ch;
        hash = hash * 1099511628211ull;
    }
    return hash;
}

// order-independent digest of every file under root
std::uint64_t tree_digest(const fs::path& root) {
    std::map<std::string, std::uint64_t> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        std::ifstream f(entry.path(), std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(f)),
                          std::istreambuf_iterator<char>());
        files[fs::relative(entry.path(), root).string()] = fnv_oracle(bytes);
    }
    std::uint64_t digest = 0;
    for (const auto& [name, h] : files) digest = fnv_oracle(name) ^ (digest * 31 + h);
    return digest;
}

DatasetManifest tiny_dataset(const fs::path& dir, const std::string& name, int items,
                             std::uint64_t seed) {
    std::vector<ImageBuffer> images;
    std::vector<int> labels;
    for (int i = 0; i < items; ++i) {
        images.push_back(ts::blob_image(24, seed, i));
        labels.push_back(i % 2);
    }
    return ts::write_image_dataset(dir, name, "microscopy", {"neg", "pos"}, images,
                                   labels);
}

} // namespace

TEST_CASE("derive_item_seed matches an independent FNV-1a evaluation") {
    auto seed = derive_item_seed(7, "d", CorruptionKind::gaussian_noise, 1, "x");
    CHECK(seed == fnv_oracle("7|d|gaussian_noise|1|x"));
    CHECK(derive_item_seed(7, "d", CorruptionKind::gaussian_noise, 1, "x") == seed);
    CHECK(derive_item_seed(8, "d", CorruptionKind::gaussian_noise, 1, "x") != seed);
}

TEST_CASE("derived seeds are collision free across the benchmark axes") {
    std::set<std::uint64_t> seen;
    int tuples = 0;
    for (int ds = 0; ds < 5; ++ds)
        for (auto kind : kBenchmarkKinds)
            for (int sev = 1; sev <= 5; ++sev)
                for (int item = 0; item < 20; ++item) {
                    seen.insert(derive_item_seed(123, "set" + std::to_string(ds), kind,
                                                 sev, "item" + std::to_string(item)));
                    ++tuples;
                }
    CHECK(tuples == 5 * 7 * 5 * 20);
    CHECK(seen.size() == static_cast<std::size_t>(tuples));
}

TEST_CASE("one manifest yields 35 sets with labels preserved") {
    ts::TempDir tmp("bench35");
    auto manifest = tiny_dataset(tmp / "src", "alpha", 6, 11);

    BenchmarkOptions opts;
    opts.global_seed = 5;
    opts.workers = 2;
    auto layout = build_benchmark({manifest}, tmp / "out", opts);
    CHECK(layout.entries.size() == 35);

    for (const auto& [key, path] : layout.entries) {
        auto derived = load_manifest(path);
        CHECK(derived.items.size() == manifest.items.size());
        CHECK(derived.class_names == manifest.class_names);
        REQUIRE(derived.corruption.has_value());
        CHECK(derived.corruption->kind == kind_name(std::get<1>(key)));
        CHECK(derived.corruption->severity == std::get<2>(key));
        for (std::size_t i = 0; i < derived.items.size(); ++i) {
            CHECK(derived.items[i].label == manifest.items[i].label);
            CHECK(fs::exists(derived.resolve(derived.items[i])));
        }
    }

    auto reloaded = load_layout(tmp / "out" / "layout.json");
    CHECK(reloaded.entries.size() == 35);
}

TEST_CASE("same seed gives byte-identical trees; workers do not matter") {
    ts::TempDir tmp("benchdet");
    auto m1 = tiny_dataset(tmp / "src1", "alpha", 4, 21);
    auto m2 = tiny_dataset(tmp / "src2", "beta", 3, 22);

    BenchmarkOptions opts;
    opts.global_seed = 99;
    opts.workers = 1;
    build_benchmark({m1, m2}, tmp / "out_a", opts);
    auto digest_a = tree_digest(tmp / "out_a");

    build_benchmark({m1, m2}, tmp / "out_b", opts);
    CHECK(tree_digest(tmp / "out_b") == digest_a);

    opts.workers = 8;
    build_benchmark({m1, m2}, tmp / "out_c", opts);
    CHECK(tree_digest(tmp / "out_c") == digest_a);

    opts.global_seed = 100;
    build_benchmark({m1, m2}, tmp / "out_d", opts);
    CHECK(tree_digest(tmp / "out_d") != digest_a);
}

TEST_CASE("kind and severity filters restrict the layout") {
    ts::TempDir tmp("benchfilter");
    auto manifest = tiny_dataset(tmp / "src", "alpha", 2, 31);
    BenchmarkOptions opts;
    opts.kinds = {CorruptionKind::brightness, CorruptionKind::pixelate};
    opts.severities = {1, 5};
    auto layout = build_benchmark({manifest}, tmp / "out", opts);
    CHECK(layout.entries.size() == 4);
}

TEST_CASE("unreadable source aborts that dataset") {
    ts::TempDir tmp("benchfail");
    auto good = tiny_dataset(tmp / "good", "good", 2, 41);
    auto bad = tiny_dataset(tmp / "bad", "bad", 2, 42);
    fs::remove(tmp / "bad" / "item_00001.png");

    BenchmarkOptions opts;
    opts.severities = {1};
    opts.kinds = {CorruptionKind::brightness};
    CHECK_THROWS(build_benchmark({bad, good}, tmp / "out1", opts));
    // without keep-going nothing marks the bad dataset valid
    CHECK_FALSE(fs::exists(tmp / "out1" / "bad" / "brightness" / "1" / "manifest.json"));

    opts.keep_going = true;
    auto layout = build_benchmark({bad, good}, tmp / "out2", opts);
    CHECK(layout.entries.size() == 1);
    CHECK(layout.entries.count({"good", CorruptionKind::brightness, 1}) == 1);
}

TEST_CASE("outputs never overwrite inputs") {
    ts::TempDir tmp("benchcollide");
    // a source image placed exactly where the benchmark would write it
    auto dir = tmp / "out" / "evil" / "brightness" / "1";
    fs::create_directories(dir);
    std::vector<ImageBuffer> images{ts::blob_image(16, 1, 0)};
    auto manifest =
        ts::write_image_dataset(dir, "evil", "microscopy", {"a"}, images, {0});

    BenchmarkOptions opts;
    opts.kinds = {CorruptionKind::brightness};
    opts.severities = {1};
    CHECK_THROWS(build_benchmark({manifest}, tmp / "out", opts));
}

TEST_CASE("decode cache reproduces identical outputs") {
    ts::TempDir tmp("benchcache");
    ts::TempDir cache("benchcachedir");
    auto manifest = tiny_dataset(tmp / "src", "alpha", 3, 51);
    BenchmarkOptions opts;
    opts.kinds = {CorruptionKind::contrast};
    opts.severities = {2};

    build_benchmark({manifest}, tmp / "plain", opts);
    ::setenv("CORRUPTBENCH_CACHE", cache.path().c_str(), 1);
    build_benchmark({manifest}, tmp / "warm", opts);   // fills the cache
    build_benchmark({manifest}, tmp / "cached", opts); // reads it back
    ::unsetenv("CORRUPTBENCH_CACHE");
    CHECK(tree_digest(tmp / "plain") == tree_digest(tmp / "warm"));
    CHECK(tree_digest(tmp / "plain") == tree_digest(tmp / "cached"));
    CHECK_FALSE(fs::is_empty(cache.path()));
}
