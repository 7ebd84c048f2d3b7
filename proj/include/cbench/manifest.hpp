#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cbench {

struct ManifestItem {
    std::string id;
    std::string path; // relative to the manifest's directory
    int label = 0;
};

/// Provenance tag carried by manifests that benchgen derives from a clean
/// source. Absent on clean manifests.
struct CorruptionTag {
    std::string kind;
    int severity = 0;
};

struct DatasetManifest {
    std::string dataset_name;
    std::string modality;
    std::vector<std::string> class_names; // index = label id
    std::vector<ManifestItem> items;
    std::optional<CorruptionTag> corruption;

    /// Directory the item paths are relative to; set on load, used to
    /// resolve images.
    std::filesystem::path base_dir;

    std::filesystem::path resolve(const ManifestItem& item) const {
        return base_dir / item.path;
    }
};

/// Loads and validates a manifest. Violations (duplicate ids, label out of
/// range, empty class list) raise DataError with row context.
DatasetManifest load_manifest(const std::filesystem::path& path);

/// Validates and writes a manifest as JSON. Item paths are stored as given
/// and interpreted relative to the manifest's directory.
void save_manifest(const DatasetManifest& m, const std::filesystem::path& path);

/// Checks manifest invariants; returns an error description or nullopt.
std::optional<std::string> manifest_problem(const DatasetManifest& m);

struct PredictionRow {
    std::string item_id;
    std::string corruption; // "clean" or a corruption kind name
    int severity = 0;       // 0 iff corruption == "clean"
    int true_label = 0;
    int pred_label = 0;
};

using PredictionLog = std::vector<PredictionRow>;

/// CSV with header item_id,corruption,severity,true_label,pred_label.
PredictionLog load_prediction_log(const std::filesystem::path& path);
void save_prediction_log(const PredictionLog& log, const std::filesystem::path& path);

} // namespace cbench
