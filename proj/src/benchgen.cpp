#include "cbench/benchgen.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "cbench/error.hpp"
#include "cbench/rng.hpp"

namespace cbench {

namespace fs = std::filesystem;

std::uint64_t derive_item_seed(std::uint64_t global_seed, std::string_view dataset,
                               CorruptionKind kind, int severity,
                               std::string_view item_id) {
    std::string key = std::to_string(global_seed);
    key += '|';
    key += dataset;
    key += '|';
    key += kind_name(kind);
    key += '|';
    key += std::to_string(severity);
    key += '|';
    key += item_id;
    return fnv1a64(key.data(), key.size());
}

namespace {

// Optional cross-run cache of decoded images, keyed by source path, size and
// mtime. Enabled by pointing CORRUPTBENCH_CACHE at a directory.
class DecodeCache {
public:
    DecodeCache() {
        if (const char* dir = std::getenv("CORRUPTBENCH_CACHE")) {
            dir_ = dir;
            std::error_code ec;
            fs::create_directories(dir_, ec);
            enabled_ = !ec;
        }
    }

    bool lookup(const fs::path& src, ImageBuffer& out) const {
        if (!enabled_) return false;
        std::ifstream f(entry_for(src), std::ios::binary);
        if (!f) return false;
        std::int32_t h, w, c;
        f.read(reinterpret_cast<char*>(&h), 4);
        f.read(reinterpret_cast<char*>(&w), 4);
        f.read(reinterpret_cast<char*>(&c), 4);
        if (!f || h <= 0 || w <= 0 || (c != 1 && c != 3)) return false;
        std::vector<std::uint8_t> bytes(static_cast<std::size_t>(h) * w * c);
        f.read(reinterpret_cast<char*>(bytes.data()),
               static_cast<std::streamsize>(bytes.size()));
        if (!f) return false;
        out = ImageBuffer(h, w, c);
        for (std::size_t i = 0; i < bytes.size(); ++i) out.pixels[i] = bytes[i] / 255.0;
        return true;
    }

    void store(const fs::path& src, const ImageBuffer& img) const {
        if (!enabled_) return;
        std::ofstream f(entry_for(src), std::ios::binary | std::ios::trunc);
        if (!f) return;
        std::int32_t h = img.height, w = img.width, c = img.channels;
        f.write(reinterpret_cast<const char*>(&h), 4);
        f.write(reinterpret_cast<const char*>(&w), 4);
        f.write(reinterpret_cast<const char*>(&c), 4);
        std::vector<std::uint8_t> bytes(img.pixels.size());
        for (std::size_t i = 0; i < img.pixels.size(); ++i)
            bytes[i] = static_cast<std::uint8_t>(quantize_intensity(img.pixels[i]));
        f.write(reinterpret_cast<const char*>(bytes.data()),
                static_cast<std::streamsize>(bytes.size()));
    }

private:
    fs::path entry_for(const fs::path& src) const {
        std::error_code ec;
        auto abs = fs::weakly_canonical(src, ec).string();
        auto size = fs::file_size(src, ec);
        auto mtime = fs::last_write_time(src, ec).time_since_epoch().count();
        std::string key = abs + "|" + std::to_string(size) + "|" + std::to_string(mtime);
        char name[24];
        std::snprintf(name, sizeof name, "%016llx.raw",
                      static_cast<unsigned long long>(fnv1a64(key.data(), key.size())));
        return dir_ / name;
    }

    fs::path dir_;
    bool enabled_ = false;
};

void check_item_id(const std::string& id) {
    if (id.empty() || id.find('/') != std::string::npos ||
        id.find('\\') != std::string::npos || id == "." || id == "..")
        throw DataError("item id \"" + id + "\" is not usable as a file name");
}

} // namespace

BenchmarkLayout build_benchmark(const std::vector<DatasetManifest>& manifests,
                                const fs::path& out_root,
                                const BenchmarkOptions& options) {
    if (options.kinds.empty() || options.severities.empty())
        throw DataError("no corruption kinds or severities selected");
    for (int s : options.severities)
        if (s < 1 || s > 5) throw DataError("severity outside [1,5]");

    DecodeCache cache;
    BenchmarkLayout layout;
    layout.root = out_root;
    std::string first_failure;

    for (const auto& m : manifests) {
        if (auto problem = manifest_problem(m))
            throw DataError("manifest " + m.dataset_name + ": " + *problem);
        for (const auto& item : m.items) check_item_id(item.id);

        for (auto kind : options.kinds)
            for (int severity : options.severities)
                fs::create_directories(out_root / m.dataset_name / kind_name(kind) /
                                       std::to_string(severity));

        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::mutex err_mutex;
        std::string dataset_error;

        auto worker = [&]() {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= m.items.size() || failed.load()) return;
                const auto& item = m.items[i];
                try {
                    fs::path src = m.resolve(item);
                    ImageBuffer img;
                    if (!cache.lookup(src, img)) {
                        img = load_image(src);
                        cache.store(src, img);
                    }
                    for (auto kind : options.kinds)
                        for (int severity : options.severities) {
                            fs::path dst = out_root / m.dataset_name / kind_name(kind) /
                                           std::to_string(severity) / (item.id + ".png");
                            std::error_code ec;
                            if (fs::equivalent(src, dst, ec))
                                throw DataError("output path collides with input: " +
                                                dst.string());
                            CorruptionSpec spec{kind, severity,
                                                derive_item_seed(options.global_seed,
                                                                 m.dataset_name, kind,
                                                                 severity, item.id)};
                            save_image(apply_corruption(img, spec), dst);
                        }
                } catch (const std::exception& e) {
                    std::lock_guard lock(err_mutex);
                    if (!failed.exchange(true))
                        dataset_error = "dataset " + m.dataset_name + ", item " +
                                        item.id + ": " + e.what();
                }
            }
        };

        int workers = std::max(1, options.workers);
        std::vector<std::thread> pool;
        for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();

        if (failed.load()) {
            if (!options.keep_going) throw IoError(dataset_error);
            if (options.log) options.log("skipped: " + dataset_error);
            if (first_failure.empty()) first_failure = dataset_error;
            continue;
        }

        // all images written; only now emit the manifests that mark the sets
        // valid
        for (auto kind : options.kinds)
            for (int severity : options.severities) {
                DatasetManifest derived;
                derived.dataset_name = m.dataset_name;
                derived.modality = m.modality;
                derived.class_names = m.class_names;
                derived.corruption = CorruptionTag{kind_name(kind), severity};
                for (const auto& item : m.items)
                    derived.items.push_back({item.id, item.id + ".png", item.label});
                fs::path dir = out_root / m.dataset_name / kind_name(kind) /
                               std::to_string(severity);
                save_manifest(derived, dir / "manifest.json");
                layout.entries[{m.dataset_name, kind, severity}] = dir / "manifest.json";
            }
        if (options.log)
            options.log(m.dataset_name + ": " +
                        std::to_string(options.kinds.size() * options.severities.size()) +
                        " sets written");
    }

    save_layout(layout, out_root / "layout.json");
    return layout;
}

void save_layout(const BenchmarkLayout& layout, const fs::path& path) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [key, manifest_path] : layout.entries) {
        const auto& [dataset, kind, severity] = key;
        entries.push_back({{"dataset", dataset},
                           {"kind", kind_name(kind)},
                           {"severity", severity},
                           {"manifest", fs::relative(manifest_path, layout.root).string()}});
    }
    // manifest paths are stored relative to the layout file, so the tree is
    // byte-identical wherever it lands
    nlohmann::json j = {{"entries", entries}};
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("cannot write layout " + path.string());
    f << j.dump(2) << "\n";
}

BenchmarkLayout load_layout(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open layout " + path.string());
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    BenchmarkLayout layout;
    layout.root = path.parent_path();
    try {
        for (const auto& e : j.at("entries")) {
            auto kind = kind_from_name(e.at("kind").get<std::string>());
            if (!kind) throw DataError("unknown kind in layout");
            layout.entries[{e.at("dataset").get<std::string>(), *kind,
                            e.at("severity").get<int>()}] =
                layout.root / e.at("manifest").get<std::string>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": layout schema violation: " + e.what());
    }
    return layout;
}

} // namespace cbench
