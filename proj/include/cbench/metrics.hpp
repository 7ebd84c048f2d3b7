#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cbench/corruptions.hpp"
#include "cbench/manifest.hpp"

namespace cbench {

/// Per-(kind, severity) Top-1 accuracies plus a clean accuracy, all as
/// fractions in [0,1]. The covered kinds are explicit; metrics refuse to
/// impute missing cells.
struct AccuracyGrid {
    std::string model_id;
    std::string dataset_id;
    double clean_acc = 0.0;
    std::map<CorruptionKind, std::array<double, 5>> cells;

    std::vector<CorruptionKind> kinds() const;
};

/// Clean error, per-corruption CE, mCE and average accuracy for one model
/// against a baseline, in percent to match reporting convention.
struct RobustnessReport {
    std::string model_id;
    std::string baseline_id;
    double clean_error_pct = 0.0;
    std::map<CorruptionKind, double> ce_pct;
    double mce_pct = 0.0;
    double avg_acc_pct = 0.0;
};

/// Counts per-cell accuracies from a prediction log. Every (kind, severity)
/// group present must be non-empty and severity-0 rows must exist.
AccuracyGrid score_predictions(const PredictionLog& log);

/// 1 - accuracy. Input must lie in [0,1].
double top1_error(double acc);

/// 100 * (sum of model per-severity errors) / (sum of baseline errors).
/// Both spans carry exactly the five severity errors.
double corruption_error(std::span<const double, 5> model_errors,
                        std::span<const double, 5> baseline_errors);

/// Arithmetic mean of per-kind CE values.
double mean_corruption_error(const std::map<CorruptionKind, double>& ce_by_kind);

/// 100 * model clean error / baseline clean error.
double clean_error_ratio(double model_clean_err, double baseline_clean_err);

/// 100 * mean over kinds of (mean over the five severities of accuracy).
double average_accuracy(const AccuracyGrid& grid);

/// Assembles the full report; both grids must cover identical cells.
RobustnessReport build_report(const AccuracyGrid& model, const AccuracyGrid& baseline);

// Grid CSV: header kind,severity,accuracy with severity 0 = clean.
AccuracyGrid load_grid_csv(const std::filesystem::path& path);
void save_grid_csv(const AccuracyGrid& grid, const std::filesystem::path& path);

void save_report_json(const RobustnessReport& report, const std::filesystem::path& path);
void save_report_csv(const RobustnessReport& report, const std::filesystem::path& path);
std::string report_to_string(const RobustnessReport& report);

} // namespace cbench
