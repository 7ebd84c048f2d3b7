#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cbench/benchgen.hpp"
#include "cbench/manifest.hpp"
#include "cbench/metrics.hpp"
#include "reference_tables.hpp"
#include "synthetic.hpp"
#include "test_util.hpp"

using namespace cbench;
namespace ts = cbench::testsupport;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args, const fs::path& stdout_file = {}) {
    std::string cmd = std::string(CORRUPTBENCH_BIN) + " " + args;
    if (!stdout_file.empty()) cmd += " > " + stdout_file.string();
    cmd += " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("cli: tables prints the 7x5 parameter csv") {
    ts::TempDir tmp("clitables");
    CHECK(run_cli("tables", tmp / "out.csv") == 0);
    auto text = slurp(tmp / "out.csv");
    std::istringstream lines(text);
    std::string line;
    int rows = 0;
    while (std::getline(lines, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 8); // header + 7 kinds
    CHECK(text.find("gaussian_noise,0.08,0.12,0.18,0.26,0.38") != std::string::npos);
    CHECK(text.find("motion_blur,7,9,13,17,21") != std::string::npos);
    CHECK(text.find("block_jpeg") == std::string::npos);

    CHECK(run_cli("tables --all", tmp / "all.csv") == 0);
    CHECK(slurp(tmp / "all.csv").find("block_jpeg,25,18,15,10,7") != std::string::npos);
}

TEST_CASE("cli: exit codes") {
    ts::TempDir tmp("clicodes");
    CHECK(run_cli("no_such_command") == 1);
    CHECK(run_cli("corrupt") == 1); // missing required options
    {
        std::ofstream f(tmp / "bad.json");
        f << "{\"not\": \"a manifest\"}";
    }
    CHECK(run_cli("corrupt --manifest " + (tmp / "bad.json").string() + " --out " +
                  (tmp / "out").string()) == 2);
}

TEST_CASE("cli: corrupt then analyze end to end") {
    ts::TempDir tmp("clicorrupt");
    std::vector<ImageBuffer> images;
    std::vector<int> labels;
    for (int i = 0; i < 4; ++i) {
        images.push_back(ts::blob_image(24, 7, i));
        labels.push_back(i % 2);
    }
    ts::write_image_dataset(tmp / "src", "demo", "microscopy", {"n", "p"}, images,
                            labels);

    auto rc = run_cli("--seed 9 corrupt --manifest " +
                      (tmp / "src" / "manifest.json").string() + " --out " +
                      (tmp / "bench").string() +
                      " --kinds gaussian_noise brightness --severities 1 3 --json",
                      tmp / "summary.json");
    CHECK(rc == 0);
    auto summary = nlohmann::json::parse(slurp(tmp / "summary.json"));
    CHECK(summary.at("status") == "ok");
    CHECK(fs::exists(tmp / "bench" / "layout.json"));
    CHECK(fs::exists(tmp / "bench" / "demo" / "brightness" / "3" / "manifest.json"));
    CHECK(load_layout(tmp / "bench" / "layout.json").entries.size() == 4);

    // idempotent: a second identical run rewrites the same bytes
    auto bytes_before = slurp(tmp / "bench" / "demo" / "brightness" / "3" / "item_00002.png");
    CHECK(run_cli("--seed 9 corrupt --manifest " +
                  (tmp / "src" / "manifest.json").string() + " --out " +
                  (tmp / "bench2").string() +
                  " --kinds gaussian_noise brightness --severities 1 3") == 0);
    CHECK(slurp(tmp / "bench2" / "demo" / "brightness" / "3" / "item_00002.png") ==
          bytes_before);

    CHECK(run_cli("analyze --dir " + (tmp / "bench" / "demo" / "brightness" / "3").string() +
                  " --mode hist --out " + (tmp / "hist.csv").string()) == 0);
    CHECK(slurp(tmp / "hist.csv").find("bin,intensity,mass") == 0);
    CHECK(run_cli("analyze --dir " + (tmp / "src").string() + " --mode dct --out " +
                  (tmp / "dct.csv").string()) == 0);
    CHECK(slurp(tmp / "dct.csv").find("u,v,mean_magnitude") == 0);
}

TEST_CASE("cli: five datasets yield 175 corruption sets") {
    ts::TempDir tmp("cli175");
    std::string manifest_args;
    for (int d = 0; d < 5; ++d) {
        std::vector<ImageBuffer> images;
        std::vector<int> labels;
        for (int i = 0; i < 6; ++i) {
            images.push_back(ts::blob_image(16, 60 + d, i));
            labels.push_back(i % 2);
        }
        ts::write_image_dataset(tmp / ("d" + std::to_string(d)),
                                "d" + std::to_string(d), "microscopy", {"a", "b"},
                                images, labels);
        manifest_args += " " + (tmp / ("d" + std::to_string(d)) / "manifest.json").string();
    }
    CHECK(run_cli("--seed 3 corrupt --manifest" + manifest_args + " --out " +
                  (tmp / "bench").string()) == 0);
    CHECK(load_layout(tmp / "bench" / "layout.json").entries.size() == 175);
}

TEST_CASE("cli: evaluate reads the shipped grid fixtures") {
    ts::TempDir tmp("clieval");
    fs::path fixtures(FIXTURES_DIR);
    REQUIRE(fs::exists(fixtures / "rmc_cell.csv"));
    auto rc = run_cli("evaluate --grid " + (fixtures / "rmc_cell.csv").string() +
                          " --baseline-grid " + (fixtures / "clip_cell.csv").string() +
                          " --out " + (tmp / "fixture_report.json").string(),
                      tmp / "fixture_line.txt");
    CHECK(rc == 0);
    auto fixture_report = nlohmann::json::parse(slurp(tmp / "fixture_report.json"));
    CHECK(std::abs(fixture_report.at("mce_pct").get<double>() - 70.1) < 0.15);

    auto model = ts::grid_from_row(
        ts::find_accuracy_row("medimeta_c", "cell_microscopy", "rmedclip"));
    auto baseline = ts::grid_from_row(
        ts::find_accuracy_row("medimeta_c", "cell_microscopy", "clip"));
    save_grid_csv(model, tmp / "rmc_cell.csv");
    save_grid_csv(baseline, tmp / "clip_cell.csv");

    rc = run_cli("evaluate --grid " + (tmp / "rmc_cell.csv").string() +
                 " --baseline-grid " + (tmp / "clip_cell.csv").string() +
                 " --out " + (tmp / "report.json").string() + " --json",
                 tmp / "line.json");
    CHECK(rc == 0);
    auto report = nlohmann::json::parse(slurp(tmp / "report.json"));
    CHECK(std::abs(report.at("mce_pct").get<double>() - 70.1) < 0.15);
    CHECK(std::abs(report.at("clean_error_pct").get<double>() - 24.3) < 0.15);

    // csv flavor
    CHECK(run_cli("evaluate --grid " + (tmp / "rmc_cell.csv").string() +
                  " --baseline-grid " + (tmp / "clip_cell.csv").string() + " --out " +
                  (tmp / "report.csv").string()) == 0);
    CHECK(slurp(tmp / "report.csv").find("mce_pct,") != std::string::npos);

    // passing both sources at once is a data error
    CHECK(run_cli("evaluate --grid a.csv --log b.csv") == 2);
}

TEST_CASE("cli: train then predict then evaluate from logs") {
    ts::TempDir tmp("clitrain");
    auto ds = ts::make_shapes_dataset(80, 24, 3);
    ts::write_image_dataset(tmp / "train", "shapes", "shapes", ds.class_names,
                            ds.train_images, ds.train_labels);
    ts::write_image_dataset(tmp / "test", "shapes", "shapes", ds.class_names,
                            ds.test_images, ds.test_labels);

    std::string small = " --model-dim 32 --heads 2 --layers 1 --embed-dim 16"
                        " --patch-size 8 --mlp-ratio 2";
    auto rc = run_cli("--seed 4 train --manifest " +
                          (tmp / "train" / "manifest.json").string() + " --percent 20" +
                          " --rank 4 --epochs 2 --batch 16" + small + " --out " +
                          (tmp / "w.bin").string(),
                      tmp / "train.log");
    CHECK(rc == 0);
    CHECK(fs::exists(tmp / "w.bin"));

    CHECK(run_cli("predict --weights " + (tmp / "w.bin").string() + " --manifest " +
                  (tmp / "test" / "manifest.json").string() + " --out " +
                  (tmp / "clean.csv").string()) == 0);
    auto log = load_prediction_log(tmp / "clean.csv");
    CHECK(log.size() == 24);
    CHECK(log.front().corruption == "clean");
    CHECK(log.front().severity == 0);

    // corrupt the test split, predict on two derived sets, evaluate end to end
    CHECK(run_cli("--seed 4 corrupt --manifest " +
                  (tmp / "test" / "manifest.json").string() + " --out " +
                  (tmp / "bench").string()) == 0);
    std::string manifests;
    for (auto kind : kBenchmarkKinds)
        for (int sev = 1; sev <= 5; ++sev)
            manifests += " " + (tmp / "bench" / "shapes" / kind_name(kind) /
                                std::to_string(sev) / "manifest.json")
                                   .string();
    CHECK(run_cli("predict --weights " + (tmp / "w.bin").string() + " --manifest" +
                  manifests + " " + (tmp / "test" / "manifest.json").string() +
                  " --out " + (tmp / "full.csv").string()) == 0);
    auto full = load_prediction_log(tmp / "full.csv");
    CHECK(full.size() == 24 * 36);

    // force one wrong row per cell so no accuracy cell is perfect, then the
    // log evaluated against itself sits at exactly 100
    std::set<std::pair<std::string, int>> seen;
    for (auto& row : full)
        if (seen.insert({row.corruption, row.severity}).second)
            row.pred_label = (row.true_label + 1) % 4;
    save_prediction_log(full, tmp / "imperfect.csv");
    CHECK(run_cli("evaluate --log " + (tmp / "imperfect.csv").string() +
                  " --baseline-log " + (tmp / "imperfect.csv").string() + " --out " +
                  (tmp / "self.json").string()) == 0);
    auto self_report = nlohmann::json::parse(slurp(tmp / "self.json"));
    CHECK(self_report.at("mce_pct").get<double>() == doctest::Approx(100.0));
}
