#pragma once

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tabpred/cross_validation.hpp"
#include "tabpred/importance.hpp"

namespace tabpred {

// Table-style display string, e.g. (0.914, 0.008) -> "91.40% (+/- 0.80%)".
std::string format_percent_spread(double mean, double stddev);

nlohmann::ordered_json importance_to_json(const ImportanceVector& importance);

// Full evaluation record: spec echo, seeds, per-fold metrics and confusion
// matrices, aggregates as raw numbers plus display strings.
nlohmann::ordered_json eval_report_to_json(const EvalReport& report);

// Top-level report document: format version, config echo, importance
// rankings, one entry per evaluation. An empty evaluation set is an error.
nlohmann::ordered_json build_report_document(const nlohmann::ordered_json& config_echo,
                                             const std::vector<ImportanceVector>& importances,
                                             const std::vector<EvalReport>& reports);

void write_json_file(const nlohmann::ordered_json& doc, const std::filesystem::path& path);

struct RocSeries {
    std::string label;
    std::vector<RocPoint> points; // >= 2 points, from roc_curve
    double auc = 0.0;
};

// Unit-square ROC plot: one staircase polyline per series plus a legend entry
// "<label> (AUC = 0.93)" per series, in input order. Output bytes depend only
// on the input.
void render_roc_svg(const std::vector<RocSeries>& series, std::ostream& out);
void render_roc_svg(const std::vector<RocSeries>& series, const std::filesystem::path& path);

// k x k counts as CSV; class labels form the header row and the first column
// (rows = true class, columns = predicted class).
void render_confusion_csv(const std::vector<std::vector<std::size_t>>& matrix,
                          const std::vector<std::string>& class_labels, std::ostream& out);
void render_confusion_csv(const std::vector<std::vector<std::size_t>>& matrix,
                          const std::vector<std::string>& class_labels,
                          const std::filesystem::path& path);

} // namespace tabpred
