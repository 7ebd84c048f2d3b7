#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cbench/analysis.hpp"
#include "cbench/benchgen.hpp"
#include "cbench/clip/train.hpp"
#include "cbench/clip/weights.hpp"
#include "cbench/corruptions.hpp"
#include "cbench/error.hpp"
#include "cbench/metrics.hpp"

namespace fs = std::filesystem;
using namespace cbench;

namespace {

// exit codes: 0 success, 1 usage error, 2 data error, 3 runtime failure
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kData = 2;
constexpr int kRuntime = 3;

struct GlobalOpts {
    std::uint64_t seed = 0;
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    bool json = false;
};

struct CommandOutcome {
    int exit_code = kOk;
    std::string summary;
    std::vector<fs::path> artifacts;
};

int emit_outcome(const GlobalOpts& g, const std::string& command,
                 const CommandOutcome& outcome) {
    if (g.json) {
        nlohmann::json j = {{"command", command},
                            {"status", outcome.exit_code == kOk ? "ok" : "error"},
                            {"summary", outcome.summary}};
        j["artifacts"] = nlohmann::json::array();
        for (const auto& p : outcome.artifacts) j["artifacts"].push_back(p.string());
        std::cout << j.dump() << "\n";
    } else {
        std::cout << outcome.summary << "\n";
    }
    return outcome.exit_code;
}

std::vector<CorruptionKind> parse_kinds(const std::vector<std::string>& names) {
    if (names.empty())
        return {kBenchmarkKinds.begin(), kBenchmarkKinds.end()};
    std::vector<CorruptionKind> kinds;
    for (const auto& name : names) {
        auto k = kind_from_name(name);
        if (!k) throw DataError("unknown corruption kind \"" + name + "\"");
        kinds.push_back(*k);
    }
    return kinds;
}

int cmd_tables(const GlobalOpts& g, bool all) {
    std::ostringstream out;
    out << "kind,severity_1,severity_2,severity_3,severity_4,severity_5\n";
    auto row = [&out](const char* name, const auto& values) {
        out << name;
        for (auto v : values) out << ',' << v;
        out << '\n';
    };
    row("gaussian_noise", SeverityTables::gaussian_sigma);
    row("impulse_noise", SeverityTables::impulse_fraction);
    row("motion_blur", SeverityTables::motion_length);
    row("zoom_blur", SeverityTables::zoom_max);
    row("brightness", SeverityTables::brightness_delta);
    row("contrast", SeverityTables::contrast_scale);
    row("pixelate", SeverityTables::pixelate_fraction);
    if (all) row("block_jpeg", SeverityTables::jpeg_quality);
    std::cout << out.str();
    if (g.json)
        std::cout << nlohmann::json({{"command", "tables"},
                                     {"status", "ok"},
                                     {"version", SeverityTables::version}})
                         .dump()
                  << "\n";
    return kOk;
}

int cmd_corrupt(const GlobalOpts& g, const std::vector<std::string>& manifest_paths,
                const std::string& out_dir, const std::vector<std::string>& kind_names,
                std::vector<int> severities, bool keep_going) {
    std::vector<DatasetManifest> manifests;
    for (const auto& p : manifest_paths) manifests.push_back(load_manifest(p));

    BenchmarkOptions opts;
    opts.global_seed = g.seed;
    opts.workers = std::max(1, g.workers);
    opts.kinds = parse_kinds(kind_names);
    if (!severities.empty()) opts.severities = std::move(severities);
    opts.keep_going = keep_going;
    if (!g.json)
        opts.log = [](const std::string& line) { std::cerr << line << "\n"; };

    auto layout = build_benchmark(manifests, out_dir, opts);
    return emit_outcome(g, "corrupt",
                        {kOk,
                         std::to_string(layout.entries.size()) +
                             " corruption sets under " + out_dir,
                         {fs::path(out_dir) / "layout.json"}});
}

int cmd_evaluate(const GlobalOpts& g, const std::string& log_path,
                 const std::string& baseline_log_path, const std::string& grid_path,
                 const std::string& baseline_grid_path, const std::string& out_path) {
    bool from_logs = !log_path.empty();
    if (from_logs == !grid_path.empty())
        throw DataError("pass either --log/--baseline-log or --grid/--baseline-grid");

    AccuracyGrid model, baseline;
    if (from_logs) {
        if (baseline_log_path.empty()) throw DataError("--baseline-log is required");
        model = score_predictions(load_prediction_log(log_path));
        model.model_id = fs::path(log_path).stem().string();
        baseline = score_predictions(load_prediction_log(baseline_log_path));
        baseline.model_id = fs::path(baseline_log_path).stem().string();
    } else {
        if (baseline_grid_path.empty()) throw DataError("--baseline-grid is required");
        model = load_grid_csv(grid_path);
        baseline = load_grid_csv(baseline_grid_path);
    }

    auto report = build_report(model, baseline);
    CommandOutcome outcome{kOk, report_to_string(report), {}};
    if (!out_path.empty()) {
        fs::path out(out_path);
        if (out.extension() == ".csv")
            save_report_csv(report, out);
        else
            save_report_json(report, out);
        outcome.artifacts.push_back(out);
    }
    return emit_outcome(g, "evaluate", outcome);
}

int cmd_analyze(const GlobalOpts& g, const std::string& dir, const std::string& mode,
                const std::string& out_path) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".png")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DataError("no .png files in " + dir);

    std::vector<ImageBuffer> images(files.size());
    {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (std::size_t i = next.fetch_add(1); i < files.size();
                 i = next.fetch_add(1))
                images[i] = load_image(files[i]);
        };
        int n = std::clamp(g.workers, 1, 16);
        std::vector<std::thread> pool;
        for (int t = 1; t < n; ++t) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();
    }

    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + out_path);
    std::string summary;
    if (mode == "dct") {
        auto profile = frequency_profile(images);
        out << "u,v,mean_magnitude\n";
        for (int u = 0; u < profile.height; ++u)
            for (int v = 0; v < profile.width; ++v)
                out << u << ',' << v << ','
                    << profile.mean_magnitude[static_cast<std::size_t>(u) * profile.width + v]
                    << "\n";
        summary = "dct profile of " + std::to_string(images.size()) +
                  " images: low_fraction=" + std::to_string(profile.low_fraction) +
                  " high_fraction=" + std::to_string(profile.high_fraction);
    } else if (mode == "hist") {
        auto hist = pixel_histogram(images);
        out << "bin,intensity,mass\n";
        for (int b = 0; b < 256; ++b)
            out << b << ',' << (b + 0.5) / 256.0 << ',' << hist.mass[b] << "\n";
        summary = "histogram of " + std::to_string(images.size()) + " images";
    } else {
        throw DataError("--mode must be dct or hist");
    }
    return emit_outcome(g, "analyze", {kOk, summary, {out_path}});
}

int cmd_train(const GlobalOpts& g, const std::string& manifest_path, double percent,
              int rank, int epochs, double lr, int batch, double tau,
              const std::string& template_str, const std::string& out_path,
              clip::EncoderConfig cfg) {
    auto manifest = load_manifest(manifest_path);
    if (manifest.items.empty()) throw DataError("manifest has no items");

    cfg.lora_rank = rank;
    cfg.temperature = tau;
    // channel count follows the data
    cfg.channels = load_image(manifest.resolve(manifest.items.front())).channels;

    auto encoder = clip::init_encoder(cfg, g.seed);
    auto table = clip::prompt_embeddings(manifest.class_names, manifest.modality,
                                         template_str, g.seed, cfg.embed_dim);

    clip::TrainConfig tc;
    tc.learning_rate = lr;
    tc.epochs = epochs;
    tc.batch_size = batch;
    tc.percent = percent;
    tc.seed = g.seed;
    tc.workers = std::max(1, g.workers);

    auto result = clip::train_few_shot(encoder, manifest, table, tc);
    clip::WeightsFile w;
    w.encoder = std::move(result.encoder);
    w.prompt_template = template_str;
    w.prompt_seed = g.seed;
    clip::save_weights(w, out_path);

    std::ostringstream os;
    os << "trained on " << result.sample_count << " items (" << percent << "%)";
    if (!result.epoch_loss.empty())
        os << ", loss " << result.epoch_loss.front() << " -> "
           << result.epoch_loss.back();
    return emit_outcome(g, "train", {kOk, os.str(), {out_path}});
}

int cmd_predict(const GlobalOpts& g, const std::string& weights_path,
                const std::vector<std::string>& manifest_paths,
                const std::string& out_path) {
    auto w = clip::load_weights(weights_path);
    PredictionLog log;
    for (const auto& mp : manifest_paths) {
        auto manifest = load_manifest(mp);
        auto table = clip::prompt_embeddings(manifest.class_names, manifest.modality,
                                             w.prompt_template, w.prompt_seed,
                                             w.encoder.cfg.embed_dim);
        std::string tag = manifest.corruption ? manifest.corruption->kind : "clean";
        int severity = manifest.corruption ? manifest.corruption->severity : 0;
        for (const auto& item : manifest.items) {
            auto img = load_image(manifest.resolve(item));
            int pred = clip::zero_shot_predict(w.encoder, img, table);
            log.push_back({item.id, tag, severity, item.label, pred});
        }
    }
    save_prediction_log(log, out_path);
    return emit_outcome(g, "predict",
                        {kOk, std::to_string(log.size()) + " predictions -> " + out_path,
                         {out_path}});
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"corruption benchmark toolkit"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags are accepted after the subcommand too
    GlobalOpts g;
    app.add_option("--seed", g.seed, "global seed; the single source of randomness");
    app.add_option("--workers", g.workers, "worker threads (outputs never depend on this)");
    app.add_flag("--json", g.json, "machine-readable summary line");

    // tables
    auto* tables = app.add_subcommand("tables", "print the severity parameter tables");
    bool tables_all = false;
    tables->add_flag("--all", tables_all, "include the optional block_jpeg kernel");

    // corrupt
    auto* corrupt = app.add_subcommand("corrupt", "materialize corrupted datasets");
    std::vector<std::string> manifest_paths;
    std::string out_dir;
    std::vector<std::string> kind_names;
    std::vector<int> severities;
    bool keep_going = false;
    corrupt->add_option("--manifest", manifest_paths, "clean manifest path(s)")
        ->required()
        ->expected(-1);
    corrupt->add_option("--out", out_dir, "output root directory")->required();
    corrupt->add_option("--kinds", kind_names, "subset of corruption kinds");
    corrupt->add_option("--severities", severities, "subset of severities (1-5)");
    corrupt->add_flag("--keep-going", keep_going,
                      "continue with remaining datasets after a failure");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "robustness report from logs or grids");
    std::string log_path, baseline_log_path, grid_path, baseline_grid_path, report_out;
    evaluate->add_option("--log", log_path, "model prediction log CSV");
    evaluate->add_option("--baseline-log", baseline_log_path, "baseline prediction log CSV");
    evaluate->add_option("--grid", grid_path, "model accuracy grid CSV");
    evaluate->add_option("--baseline-grid", baseline_grid_path, "baseline accuracy grid CSV");
    evaluate->add_option("--out", report_out, "report output (.json or .csv)");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "frequency or density diagnostics");
    std::string analyze_dir, analyze_mode = "dct", analyze_out;
    analyze->add_option("--dir", analyze_dir, "directory of PNG images")->required();
    analyze->add_option("--mode", analyze_mode, "dct or hist");
    analyze->add_option("--out", analyze_out, "output CSV")->required();

    // train
    auto* train = app.add_subcommand("train", "few-shot adapter tuning");
    std::string train_manifest, weights_out, template_str = clip::kDefaultTemplate;
    double percent = 10.0, lr = 1e-4, tau = 0.07;
    int rank = 16, epochs = 20, batch = 32;
    clip::EncoderConfig cfg;
    train->add_option("--manifest", train_manifest, "clean training manifest")->required();
    train->add_option("--percent", percent, "few-shot share of the train split");
    train->add_option("--rank", rank, "adapter rank");
    train->add_option("--epochs", epochs, "training epochs");
    train->add_option("--lr", lr, "learning rate");
    train->add_option("--batch", batch, "batch size");
    train->add_option("--tau", tau, "softmax temperature");
    train->add_option("--template", template_str, "prompt template");
    train->add_option("--image-size", cfg.image_size, "input image size");
    train->add_option("--patch-size", cfg.patch_size, "patch size");
    train->add_option("--model-dim", cfg.model_dim, "transformer width");
    train->add_option("--layers", cfg.num_layers, "transformer depth");
    train->add_option("--heads", cfg.num_heads, "attention heads");
    train->add_option("--mlp-ratio", cfg.mlp_ratio, "mlp expansion ratio");
    train->add_option("--embed-dim", cfg.embed_dim, "output embedding size");
    train->add_option("--out", weights_out, "weights output path")->required();

    // predict
    auto* predict = app.add_subcommand("predict", "zero-shot predictions to a CSV log");
    std::string weights_path, predictions_out;
    std::vector<std::string> predict_manifests;
    predict->add_option("--weights", weights_path, "trained weights file")->required();
    predict->add_option("--manifest", predict_manifests, "manifest(s) to predict")
        ->required()
        ->expected(-1);
    predict->add_option("--out", predictions_out, "prediction log CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (tables->parsed()) return cmd_tables(g, tables_all);
        if (corrupt->parsed())
            return cmd_corrupt(g, manifest_paths, out_dir, kind_names, severities,
                               keep_going);
        if (evaluate->parsed())
            return cmd_evaluate(g, log_path, baseline_log_path, grid_path,
                                baseline_grid_path, report_out);
        if (analyze->parsed()) return cmd_analyze(g, analyze_dir, analyze_mode, analyze_out);
        if (train->parsed())
            return cmd_train(g, train_manifest, percent, rank, epochs, lr, batch, tau,
                             template_str, weights_out, cfg);
        if (predict->parsed())
            return cmd_predict(g, weights_path, predict_manifests, predictions_out);
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kUsage;
}
