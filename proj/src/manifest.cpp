#include "cbench/manifest.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "cbench/error.hpp"

namespace cbench {

namespace {

using nlohmann::json;

json to_json(const DatasetManifest& m) {
    json items = json::array();
    for (const auto& it : m.items)
        items.push_back({{"id", it.id}, {"path", it.path}, {"label", it.label}});
    json j = {{"dataset_name", m.dataset_name},
              {"modality", m.modality},
              {"class_names", m.class_names},
              {"items", items}};
    if (m.corruption)
        j["corruption"] = {{"kind", m.corruption->kind},
                           {"severity", m.corruption->severity}};
    return j;
}

} // namespace

std::optional<std::string> manifest_problem(const DatasetManifest& m) {
    if (m.class_names.empty()) return "class_names is empty";
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < m.items.size(); ++i) {
        const auto& it = m.items[i];
        if (!seen.insert(it.id).second)
            return "duplicate item_id \"" + it.id + "\" at item " + std::to_string(i);
        if (it.label < 0 || static_cast<std::size_t>(it.label) >= m.class_names.size())
            return "label " + std::to_string(it.label) + " out of range at item " +
                   std::to_string(i) + " (id \"" + it.id + "\", " +
                   std::to_string(m.class_names.size()) + " classes)";
    }
    return std::nullopt;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open manifest " + path.string());
    json j;
    try {
        f >> j;
    } catch (const json::parse_error& e) {
        throw DataError(path.string() + ": " + e.what());
    }

    DatasetManifest m;
    try {
        m.dataset_name = j.at("dataset_name").get<std::string>();
        m.modality = j.at("modality").get<std::string>();
        m.class_names = j.at("class_names").get<std::vector<std::string>>();
        for (const auto& item : j.at("items")) {
            ManifestItem it;
            it.id = item.at("id").get<std::string>();
            it.path = item.at("path").get<std::string>();
            it.label = item.at("label").get<int>();
            m.items.push_back(std::move(it));
        }
        if (j.contains("corruption")) {
            CorruptionTag tag;
            tag.kind = j["corruption"].at("kind").get<std::string>();
            tag.severity = j["corruption"].at("severity").get<int>();
            m.corruption = tag;
        }
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": manifest schema violation: " + e.what());
    }

    if (auto problem = manifest_problem(m))
        throw DataError(path.string() + ": " + *problem);

    m.base_dir = path.has_parent_path() ? path.parent_path()
                                        : std::filesystem::path(".");
    return m;
}

void save_manifest(const DatasetManifest& m, const std::filesystem::path& path) {
    if (auto problem = manifest_problem(m))
        throw DataError("refusing to save invalid manifest: " + *problem);
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("cannot write manifest " + path.string());
    f << to_json(m).dump(2) << "\n";
    if (!f) throw IoError("short write to " + path.string());
}

PredictionLog load_prediction_log(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open prediction log " + path.string());
    std::string line;
    if (!std::getline(f, line))
        throw DataError(path.string() + ": empty prediction log");
    if (line != "item_id,corruption,severity,true_label,pred_label")
        throw DataError(path.string() + ": unexpected header \"" + line + "\"");

    PredictionLog log;
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        PredictionRow row;
        std::string severity, true_label, pred_label;
        if (!std::getline(ss, row.item_id, ',') ||
            !std::getline(ss, row.corruption, ',') ||
            !std::getline(ss, severity, ',') ||
            !std::getline(ss, true_label, ',') ||
            !std::getline(ss, pred_label))
            throw DataError(path.string() + ":" + std::to_string(lineno) +
                            ": expected 5 comma-separated fields");
        try {
            row.severity = std::stoi(severity);
            row.true_label = std::stoi(true_label);
            row.pred_label = std::stoi(pred_label);
        } catch (const std::exception&) {
            throw DataError(path.string() + ":" + std::to_string(lineno) +
                            ": non-numeric field");
        }
        bool clean = row.corruption == "clean";
        if (clean != (row.severity == 0))
            throw DataError(path.string() + ":" + std::to_string(lineno) +
                            ": severity must be 0 exactly for clean rows");
        if (row.true_label < 0 || row.pred_label < 0)
            throw DataError(path.string() + ":" + std::to_string(lineno) +
                            ": negative label id");
        log.push_back(std::move(row));
    }
    return log;
}

void save_prediction_log(const PredictionLog& log, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("cannot write prediction log " + path.string());
    f << "item_id,corruption,severity,true_label,pred_label\n";
    for (const auto& row : log)
        f << row.item_id << ',' << row.corruption << ',' << row.severity << ','
          << row.true_label << ',' << row.pred_label << '\n';
    if (!f) throw IoError("short write to " + path.string());
}

} // namespace cbench
