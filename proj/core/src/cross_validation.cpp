#include "tabpred/cross_validation.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "tabpred/error.hpp"
#include "tabpred/parallel.hpp"
#include "tabpred/rng.hpp"
#include "tabpred/split.hpp"

namespace tabpred {

std::string to_string(ImputeScope scope) {
    return scope == ImputeScope::train_only ? "train_only" : "whole_table";
}

ImputeScope impute_scope_from_string(const std::string& text) {
    if (text == "train_only") return ImputeScope::train_only;
    if (text == "whole_table") return ImputeScope::whole_table;
    throw ValidationError("unknown impute scope '" + text +
                          "' (expected train_only or whole_table)");
}

namespace {

// Dense matrix of the listed columns, in list order.
Matrix project_columns(const DataTable& table, const std::vector<std::size_t>& cols) {
    Matrix m(table.n_rows(), cols.size());
    for (std::size_t r = 0; r < table.n_rows(); ++r)
        for (std::size_t j = 0; j < cols.size(); ++j) {
            const auto& cell = table.cell(r, cols[j]);
            if (!cell)
                throw Error("internal: missing cell survived imputation at row " +
                            std::to_string(r));
            m(r, j) = *cell;
        }
    return m;
}

struct FoldResult {
    FoldMetrics metrics;
    std::vector<std::vector<std::size_t>> confusion;
    ConfusionCounts counts;
    std::vector<RocPoint> roc;
    std::vector<double> pos_scores; // binary: positive-class score per test row
    std::vector<int> truth;
    std::size_t test_size = 0;
};

} // namespace

EvalReport cross_validate(const DataTable& table, const ModelSpec& spec,
                          const ResamplePlan& plan, const std::vector<std::string>& features,
                          const CvOptions& options) {
    if (!table.has_labels()) throw ValidationError("cross_validate: table has no labels");
    if (features.empty()) throw ValidationError("cross_validate: empty feature list");
    std::vector<std::size_t> cols;
    cols.reserve(features.size());
    for (const auto& name : features) cols.push_back(table.schema().require(name));

    EvalReport report;
    report.spec = spec;
    report.features = features;
    report.variant = plan.mode;
    report.fold_count = options.fold_count;
    report.cv_seed = options.seed;
    report.impute_scope = options.impute_scope;
    report.positive_label = options.positive_label;
    report.classes = table.distinct_labels();
    report.binary = report.classes.size() == 2;
    if (report.classes.size() < 2)
        throw ValidationError("cross_validate: need at least two classes");
    if (report.binary &&
        std::find(report.classes.begin(), report.classes.end(), options.positive_label) ==
            report.classes.end())
        throw ValidationError("cross_validate: positive label " +
                              std::to_string(options.positive_label) +
                              " does not occur in the data");
    std::map<int, std::size_t> class_index;
    for (std::size_t i = 0; i < report.classes.size(); ++i)
        class_index[report.classes[i]] = i;

    // Boolean gaps take a constant, so filling them up front leaks nothing
    // across the split; KNN imputation is scope-dependent.
    DataTable work = table;
    fill_boolean(work);
    if (work.missing_count() > 0 && options.impute_scope == ImputeScope::whole_table)
        knn_impute(work, options.imputer);

    report.split_seed = rng::mix(options.seed, rng::hash_string("split"));
    SplitPlan split = split_stratified(work.labels(), options.fold_count, report.split_seed);

    report.fold_model_seeds.resize(options.fold_count);
    report.fold_resample_seeds.resize(options.fold_count);
    for (std::size_t f = 0; f < options.fold_count; ++f) {
        report.fold_model_seeds[f] = rng::mix(spec.seed, rng::hash_string("fold-model"), f);
        report.fold_resample_seeds[f] =
            rng::mix(plan.seed, rng::hash_string("fold-resample"), f);
    }

    std::vector<FoldResult> results(options.fold_count);
    parallel_for(options.fold_count, [&](std::size_t f) {
        try {
            DataTable train = work.subset(split.train_rows(f));
            DataTable test = work.subset(split.test_rows(f));
            if (train.missing_count() > 0 || test.missing_count() > 0) {
                // Donor pool is the training fold as it stands before its own
                // fill, so held-out rows never donate to anything.
                DataTable donors = train;
                knn_impute(train, options.imputer);
                knn_impute_from(test, donors, options.imputer);
            }

            ResamplePlan fold_plan = plan;
            fold_plan.seed = report.fold_resample_seeds[f];
            train = resample(train, fold_plan);

            ModelSpec fold_spec = spec;
            fold_spec.seed = report.fold_model_seeds[f];
            Matrix x_train = project_columns(train, cols);
            Matrix x_test = project_columns(test, cols);
            auto model = fit(fold_spec, x_train, train.labels(), features);

            FoldResult& out = results[f];
            out.test_size = test.n_rows();
            out.truth = test.labels();
            std::vector<int> pred = predict_labels(*model, x_test);

            std::vector<int> pred_idx(pred.size()), truth_idx(out.truth.size());
            for (std::size_t i = 0; i < pred.size(); ++i) {
                pred_idx[i] = static_cast<int>(class_index.at(pred[i]));
                auto it = class_index.find(out.truth[i]);
                if (it == class_index.end())
                    throw Error("held-out label " + std::to_string(out.truth[i]) +
                                " never seen in the full table");
                truth_idx[i] = static_cast<int>(it->second);
            }
            out.confusion = confusion_matrix(pred_idx, truth_idx, report.classes.size());
            out.metrics.accuracy = confusion_accuracy(out.confusion);

            if (report.binary) {
                out.counts = binary_confusion(pred, out.truth, options.positive_label);
                BinaryMetrics bm = binary_metrics(out.counts);
                out.metrics.accuracy = bm.accuracy;
                out.metrics.sensitivity = bm.sensitivity;
                out.metrics.specificity = bm.specificity;
                Matrix scores = model->predict_scores(x_test);
                std::size_t pos_col = class_index.at(options.positive_label);
                out.pos_scores.resize(scores.rows);
                for (std::size_t i = 0; i < scores.rows; ++i)
                    out.pos_scores[i] = scores(i, pos_col);
                out.roc = roc_curve(out.pos_scores, out.truth, options.positive_label);
                out.metrics.auc = auc(out.roc);
            }
        } catch (const ValidationError& e) {
            throw ValidationError("fold " + std::to_string(f) + ": " + e.what());
        } catch (const Error& e) {
            throw Error("fold " + std::to_string(f) + ": " + e.what());
        }
    });

    std::vector<double> acc, sens, spec_v, aucs;
    std::vector<double> pooled_scores;
    std::vector<int> pooled_truth;
    for (std::size_t f = 0; f < options.fold_count; ++f) {
        FoldResult& r = results[f];
        report.fold_metrics.push_back(r.metrics);
        report.confusion.push_back(std::move(r.confusion));
        report.test_fold_sizes.push_back(r.test_size);
        acc.push_back(r.metrics.accuracy);
        if (report.binary) {
            report.binary_counts.push_back(r.counts);
            report.roc_per_fold.push_back(std::move(r.roc));
            sens.push_back(r.metrics.sensitivity);
            spec_v.push_back(r.metrics.specificity);
            aucs.push_back(r.metrics.auc);
            pooled_scores.insert(pooled_scores.end(), r.pos_scores.begin(), r.pos_scores.end());
            pooled_truth.insert(pooled_truth.end(), r.truth.begin(), r.truth.end());
        }
    }

    auto aggregate = [](const std::vector<double>& v) {
        auto [m, s] = mean_and_stddev(v);
        return MetricAggregate{m, s};
    };
    report.accuracy = aggregate(acc);
    if (report.binary) {
        report.sensitivity = aggregate(sens);
        report.specificity = aggregate(spec_v);
        report.auc = aggregate(aucs);
        report.roc_pooled = roc_curve(pooled_scores, pooled_truth, options.positive_label);
        report.pooled_auc = auc(report.roc_pooled);
    }
    return report;
}

} // namespace tabpred
