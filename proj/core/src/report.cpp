#include "tabpred/report.hpp"

#include <fstream>

#include "tabpred/error.hpp"
#include "tabpred/format.hpp"

namespace tabpred {

std::string format_percent_spread(double mean, double stddev) {
    return format_fixed(mean * 100.0, 2) + "% (+/- " + format_fixed(stddev * 100.0, 2) + "%)";
}

nlohmann::ordered_json importance_to_json(const ImportanceVector& importance) {
    nlohmann::ordered_json ranking = nlohmann::ordered_json::array();
    for (const auto& [name, value] : importance.entries)
        ranking.push_back({{"feature", name}, {"importance", value}});
    return {{"method", to_string(importance.method)},
            {"seed", importance.seed},
            {"tree_count", importance.tree_count},
            {"ranking", ranking}};
}

namespace {

nlohmann::ordered_json aggregate_json(const MetricAggregate& agg) {
    return {{"mean", agg.mean},
            {"stddev", agg.stddev},
            {"display", format_percent_spread(agg.mean, agg.stddev)}};
}

} // namespace

nlohmann::ordered_json eval_report_to_json(const EvalReport& report) {
    nlohmann::ordered_json folds = nlohmann::ordered_json::array();
    for (std::size_t f = 0; f < report.fold_metrics.size(); ++f) {
        const FoldMetrics& m = report.fold_metrics[f];
        nlohmann::ordered_json fold{{"accuracy", m.accuracy}};
        if (report.binary) {
            fold["sensitivity"] = m.sensitivity;
            fold["specificity"] = m.specificity;
            fold["auc"] = m.auc;
            const ConfusionCounts& c = report.binary_counts[f];
            fold["counts"] = {{"tp", c.tp}, {"tn", c.tn}, {"fp", c.fp}, {"fn", c.fn}};
        }
        fold["confusion"] = report.confusion[f];
        fold["test_rows"] = report.test_fold_sizes[f];
        folds.push_back(std::move(fold));
    }

    nlohmann::ordered_json fixed = nlohmann::ordered_json::object();
    for (const auto& [key, value] : Hyperparams::fixed_settings(report.spec.family))
        fixed[key] = value;

    nlohmann::ordered_json aggregates{{"accuracy", aggregate_json(report.accuracy)}};
    if (report.binary) {
        aggregates["sensitivity"] = aggregate_json(report.sensitivity);
        aggregates["specificity"] = aggregate_json(report.specificity);
        aggregates["auc"] = aggregate_json(report.auc);
    }

    nlohmann::ordered_json doc{{"family", to_string(report.spec.family)},
                               {"hyperparameters", report.spec.hp.values()},
                               {"fixed_settings", fixed},
                               {"model_seed", report.spec.seed},
                               {"features", report.features},
                               {"variant", to_string(report.variant)},
                               {"fold_count", report.fold_count},
                               {"cv_seed", report.cv_seed},
                               {"split_seed", report.split_seed},
                               {"fold_model_seeds", report.fold_model_seeds},
                               {"fold_resample_seeds", report.fold_resample_seeds},
                               {"impute_scope", to_string(report.impute_scope)},
                               {"classes", report.classes},
                               {"binary", report.binary},
                               {"folds", folds},
                               {"aggregates", aggregates}};
    if (report.binary) {
        doc["positive_label"] = report.positive_label;
        doc["pooled_auc"] = report.pooled_auc;
    }
    return doc;
}

nlohmann::ordered_json build_report_document(const nlohmann::ordered_json& config_echo,
                                             const std::vector<ImportanceVector>& importances,
                                             const std::vector<EvalReport>& reports) {
    if (reports.empty()) throw ValidationError("report: no evaluations to write");
    nlohmann::ordered_json importance = nlohmann::ordered_json::array();
    for (const auto& iv : importances) importance.push_back(importance_to_json(iv));
    nlohmann::ordered_json evaluations = nlohmann::ordered_json::array();
    for (const auto& r : reports) evaluations.push_back(eval_report_to_json(r));
    return {{"format_version", 1},
            {"config", config_echo},
            {"importance", importance},
            {"evaluations", evaluations}};
}

void write_json_file(const nlohmann::ordered_json& doc, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << doc.dump(2) << '\n';
    out.flush();
    if (!out.good()) throw Error("failed while writing " + path.string());
}

namespace {

constexpr double kPlotLeft = 80.0;
constexpr double kPlotTop = 40.0;
constexpr double kPlotSize = 480.0;

const char* series_color(std::size_t i) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
    return palette[i % (sizeof(palette) / sizeof(palette[0]))];
}

std::string svg_x(double fpr) { return format_fixed(kPlotLeft + fpr * kPlotSize, 2); }
std::string svg_y(double tpr) { return format_fixed(kPlotTop + (1.0 - tpr) * kPlotSize, 2); }

} // namespace

void render_roc_svg(const std::vector<RocSeries>& series, std::ostream& out) {
    if (series.empty()) throw ValidationError("roc svg: no series to draw");
    for (const RocSeries& s : series)
        if (s.points.size() < 2)
            throw ValidationError("roc svg: series '" + s.label + "' needs at least 2 points");

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"600\" "
           "viewBox=\"0 0 640 600\">\n";
    out << "  <rect x=\"0\" y=\"0\" width=\"640\" height=\"600\" fill=\"white\"/>\n";
    out << "  <rect x=\"" << format_fixed(kPlotLeft, 2) << "\" y=\"" << format_fixed(kPlotTop, 2)
        << "\" width=\"" << format_fixed(kPlotSize, 2) << "\" height=\""
        << format_fixed(kPlotSize, 2) << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int tick = 0; tick <= 4; ++tick) {
        double v = tick * 0.25;
        out << "  <text x=\"" << svg_x(v) << "\" y=\"" << format_fixed(kPlotTop + kPlotSize + 24, 2)
            << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">"
            << format_fixed(v, 2) << "</text>\n";
        out << "  <text x=\"" << format_fixed(kPlotLeft - 10, 2) << "\" y=\"" << svg_y(v)
            << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"end\" "
               "dominant-baseline=\"middle\">"
            << format_fixed(v, 2) << "</text>\n";
    }
    out << "  <text x=\"" << format_fixed(kPlotLeft + kPlotSize / 2, 2)
        << "\" y=\"570\" font-family=\"sans-serif\" font-size=\"15\" "
           "text-anchor=\"middle\">False positive rate</text>\n";
    out << "  <text x=\"24\" y=\"" << format_fixed(kPlotTop + kPlotSize / 2, 2)
        << "\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 24 "
        << format_fixed(kPlotTop + kPlotSize / 2, 2) << ")\">True positive rate</text>\n";

    // Chance diagonal for reference.
    out << "  <line x1=\"" << svg_x(0.0) << "\" y1=\"" << svg_y(0.0) << "\" x2=\"" << svg_x(1.0)
        << "\" y2=\"" << svg_y(1.0)
        << "\" stroke=\"#bbbbbb\" stroke-dasharray=\"6,4\" stroke-width=\"1\"/>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        out << "  <polyline fill=\"none\" stroke=\"" << series_color(i)
            << "\" stroke-width=\"2\" points=\"";
        for (std::size_t p = 0; p < series[i].points.size(); ++p) {
            if (p > 0) out << ' ';
            out << svg_x(series[i].points[p].fpr) << ',' << svg_y(series[i].points[p].tpr);
        }
        out << "\"/>\n";
    }

    for (std::size_t i = 0; i < series.size(); ++i) {
        double y = kPlotTop + 22 + 20 * static_cast<double>(i);
        out << "  <line x1=\"" << format_fixed(kPlotLeft + kPlotSize - 190, 2) << "\" y1=\""
            << format_fixed(y - 4, 2) << "\" x2=\"" << format_fixed(kPlotLeft + kPlotSize - 162, 2)
            << "\" y2=\"" << format_fixed(y - 4, 2) << "\" stroke=\"" << series_color(i)
            << "\" stroke-width=\"2\"/>\n";
        out << "  <text x=\"" << format_fixed(kPlotLeft + kPlotSize - 154, 2) << "\" y=\""
            << format_fixed(y, 2) << "\" font-family=\"sans-serif\" font-size=\"13\">"
            << series[i].label << " (AUC = " << format_fixed(series[i].auc, 2) << ")</text>\n";
    }
    out << "</svg>\n";
}

void render_roc_svg(const std::vector<RocSeries>& series, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    render_roc_svg(series, out);
    out.flush();
    if (!out.good()) throw Error("failed while writing " + path.string());
}

void render_confusion_csv(const std::vector<std::vector<std::size_t>>& matrix,
                          const std::vector<std::string>& class_labels, std::ostream& out) {
    const std::size_t k = matrix.size();
    if (k == 0) throw ValidationError("confusion csv: empty matrix");
    if (class_labels.size() != k)
        throw ValidationError("confusion csv: need one label per class");
    for (const auto& row : matrix)
        if (row.size() != k) throw ValidationError("confusion csv: matrix must be square");
    for (const auto& label : class_labels)
        if (label.find_first_of(",\"\n") != std::string::npos)
            throw ValidationError("confusion csv: label '" + label + "' not representable");

    for (const auto& label : class_labels) out << ',' << label;
    out << '\n';
    for (std::size_t i = 0; i < k; ++i) {
        out << class_labels[i];
        for (std::size_t j = 0; j < k; ++j) out << ',' << matrix[i][j];
        out << '\n';
    }
}

void render_confusion_csv(const std::vector<std::vector<std::size_t>>& matrix,
                          const std::vector<std::string>& class_labels,
                          const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    render_confusion_csv(matrix, class_labels, out);
    out.flush();
    if (!out.good()) throw Error("failed while writing " + path.string());
}

} // namespace tabpred
