#include "cbench/metrics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cbench/error.hpp"

namespace cbench {

std::vector<CorruptionKind> AccuracyGrid::kinds() const {
    std::vector<CorruptionKind> out;
    out.reserve(cells.size());
    for (const auto& [kind, _] : cells) out.push_back(kind);
    return out;
}

AccuracyGrid score_predictions(const PredictionLog& log) {
    if (log.empty()) throw DataError("prediction log is empty");

    struct Tally {
        long correct = 0;
        long total = 0;
    };
    Tally clean;
    std::map<std::pair<CorruptionKind, int>, Tally> cells;

    for (const auto& row : log) {
        bool correct = row.pred_label == row.true_label;
        if (row.corruption == "clean") {
            clean.total++;
            clean.correct += correct;
            continue;
        }
        auto kind = kind_from_name(row.corruption);
        if (!kind)
            throw DataError("unknown corruption tag \"" + row.corruption +
                            "\" for item " + row.item_id);
        if (row.severity < 1 || row.severity > 5)
            throw DataError("severity out of range for item " + row.item_id);
        auto& t = cells[{*kind, row.severity}];
        t.total++;
        t.correct += correct;
    }
    if (clean.total == 0) throw DataError("prediction log has no clean rows");

    AccuracyGrid grid;
    grid.clean_acc = static_cast<double>(clean.correct) / clean.total;

    std::map<CorruptionKind, int> sev_count;
    for (const auto& [key, t] : cells) {
        auto [kind, severity] = key;
        grid.cells[kind][severity - 1] = static_cast<double>(t.correct) / t.total;
        sev_count[kind]++;
    }
    for (const auto& [kind, n] : sev_count)
        if (n != 5)
            throw DataError(std::string("corruption ") + kind_name(kind) + " covers " +
                            std::to_string(n) + " severities, expected 5");
    return grid;
}

double top1_error(double acc) {
    if (!(acc >= 0.0 && acc <= 1.0))
        throw DataError("accuracy must lie in [0,1], got " + std::to_string(acc));
    return 1.0 - acc;
}

double corruption_error(std::span<const double, 5> model_errors,
                        std::span<const double, 5> baseline_errors) {
    double num = 0.0, den = 0.0;
    for (int s = 0; s < 5; ++s) {
        if (!(model_errors[s] >= 0.0 && model_errors[s] <= 1.0) ||
            !(baseline_errors[s] >= 0.0 && baseline_errors[s] <= 1.0))
            throw DataError("per-severity errors must lie in [0,1]");
        num += model_errors[s];
        den += baseline_errors[s];
    }
    if (den <= 0.0)
        throw DataError("degenerate baseline: severity-summed error is zero");
    return 100.0 * num / den;
}

double mean_corruption_error(const std::map<CorruptionKind, double>& ce_by_kind) {
    if (ce_by_kind.empty()) throw DataError("mean over an empty CE map");
    double sum = 0.0;
    for (const auto& [_, ce] : ce_by_kind) sum += ce;
    return sum / static_cast<double>(ce_by_kind.size());
}

double clean_error_ratio(double model_clean_err, double baseline_clean_err) {
    if (baseline_clean_err <= 0.0)
        throw DataError("degenerate baseline: clean error is zero");
    return 100.0 * model_clean_err / baseline_clean_err;
}

double average_accuracy(const AccuracyGrid& grid) {
    if (grid.cells.empty()) throw DataError("grid has no corruption cells");
    double kind_sum = 0.0;
    for (const auto& [_, accs] : grid.cells) {
        double s = 0.0;
        for (double a : accs) s += a;
        kind_sum += s / 5.0;
    }
    return 100.0 * kind_sum / static_cast<double>(grid.cells.size());
}

RobustnessReport build_report(const AccuracyGrid& model, const AccuracyGrid& baseline) {
    if (model.kinds() != baseline.kinds())
        throw DataError("model and baseline grids cover different corruption kinds");

    RobustnessReport report;
    report.model_id = model.model_id;
    report.baseline_id = baseline.model_id;
    report.clean_error_pct =
        clean_error_ratio(top1_error(model.clean_acc), top1_error(baseline.clean_acc));
    for (const auto& [kind, accs] : model.cells) {
        std::array<double, 5> me, be;
        const auto& bacc = baseline.cells.at(kind);
        for (int s = 0; s < 5; ++s) {
            me[s] = top1_error(accs[s]);
            be[s] = top1_error(bacc[s]);
        }
        report.ce_pct[kind] = corruption_error(me, be);
    }
    report.mce_pct = mean_corruption_error(report.ce_pct);
    report.avg_acc_pct = average_accuracy(model);
    return report;
}

AccuracyGrid load_grid_csv(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open grid " + path.string());
    std::string line;
    if (!std::getline(f, line) || line != "kind,severity,accuracy")
        throw DataError(path.string() + ": expected header kind,severity,accuracy");

    AccuracyGrid grid;
    grid.model_id = path.stem().string();
    bool have_clean = false;
    std::map<CorruptionKind, std::array<bool, 5>> seen;
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string kind_s, sev_s, acc_s;
        if (!std::getline(ss, kind_s, ',') || !std::getline(ss, sev_s, ',') ||
            !std::getline(ss, acc_s))
            throw DataError(path.string() + ":" + std::to_string(lineno) +
                            ": expected 3 fields");
        double acc;
        int severity;
        try {
            severity = std::stoi(sev_s);
            acc = std::stod(acc_s);
        } catch (const std::exception&) {
            throw DataError(path.string() + ":" + std::to_string(lineno) +
                            ": non-numeric field");
        }
        if (!(acc >= 0.0 && acc <= 1.0))
            throw DataError(path.string() + ":" + std::to_string(lineno) +
                            ": accuracy outside [0,1]");
        if (severity == 0) {
            if (have_clean)
                throw DataError(path.string() + ":" + std::to_string(lineno) +
                                ": duplicate clean row");
            grid.clean_acc = acc;
            have_clean = true;
            continue;
        }
        if (severity < 1 || severity > 5)
            throw DataError(path.string() + ":" + std::to_string(lineno) +
                            ": severity outside [0,5]");
        auto kind = kind_from_name(kind_s);
        if (!kind)
            throw DataError(path.string() + ":" + std::to_string(lineno) +
                            ": unknown corruption \"" + kind_s + "\"");
        if (seen[*kind][severity - 1])
            throw DataError(path.string() + ":" + std::to_string(lineno) +
                            ": duplicate cell");
        seen[*kind][severity - 1] = true;
        grid.cells[*kind][severity - 1] = acc;
    }
    if (!have_clean) throw DataError(path.string() + ": missing severity-0 clean row");
    for (const auto& [kind, flags] : seen)
        for (int s = 0; s < 5; ++s)
            if (!flags[s])
                throw DataError(path.string() + ": " + std::string(kind_name(kind)) +
                                " is missing severity " + std::to_string(s + 1));
    return grid;
}

void save_grid_csv(const AccuracyGrid& grid, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("cannot write grid " + path.string());
    f << "kind,severity,accuracy\n";
    f << "clean,0," << grid.clean_acc << "\n";
    for (const auto& [kind, accs] : grid.cells)
        for (int s = 0; s < 5; ++s)
            f << kind_name(kind) << ',' << (s + 1) << ',' << accs[s] << "\n";
    if (!f) throw IoError("short write to " + path.string());
}

namespace {

nlohmann::json report_json(const RobustnessReport& report) {
    nlohmann::json ce = nlohmann::json::object();
    for (const auto& [kind, v] : report.ce_pct) ce[kind_name(kind)] = v;
    return {{"model", report.model_id},
            {"baseline", report.baseline_id},
            {"clean_error_pct", report.clean_error_pct},
            {"ce_pct", ce},
            {"mce_pct", report.mce_pct},
            {"avg_acc_pct", report.avg_acc_pct}};
}

} // namespace

void save_report_json(const RobustnessReport& report, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("cannot write report " + path.string());
    f << report_json(report).dump(2) << "\n";
}

void save_report_csv(const RobustnessReport& report, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("cannot write report " + path.string());
    f << "metric,value\n";
    f << "clean_error_pct," << report.clean_error_pct << "\n";
    for (const auto& [kind, v] : report.ce_pct)
        f << "ce_" << kind_name(kind) << "_pct," << v << "\n";
    f << "mce_pct," << report.mce_pct << "\n";
    f << "avg_acc_pct," << report.avg_acc_pct << "\n";
}

std::string report_to_string(const RobustnessReport& report) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(1);
    os << report.model_id << " vs " << report.baseline_id
       << ": clean " << report.clean_error_pct;
    for (const auto& [kind, v] : report.ce_pct) os << "  " << kind_name(kind) << " " << v;
    os << "  mCE " << report.mce_pct << "  avg-acc " << report.avg_acc_pct;
    return os.str();
}

} // namespace cbench
