#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tabpred/data_table.hpp"
#include "tabpred/impute.hpp"
#include "tabpred/metrics.hpp"
#include "tabpred/model.hpp"
#include "tabpred/rebalance.hpp"

namespace tabpred {

// Where the KNN imputer takes its donor rows from when the evaluated table
// still has missing cells. train_only fits it on the training folds and
// imputes held-out rows from those donors; whole_table imputes once over all
// rows before splitting.
enum class ImputeScope { train_only, whole_table };

std::string to_string(ImputeScope scope);
ImputeScope impute_scope_from_string(const std::string& text);

struct CvOptions {
    std::size_t fold_count = 5;
    std::uint64_t seed = 0; // drives the stratified split
    ImputeScope impute_scope = ImputeScope::train_only;
    ImputerConfig imputer;
    // Binary problems only: the class whose detection rate is "sensitivity"
    // and whose score is swept for the ROC curve.
    int positive_label = 1;
};

struct FoldMetrics {
    double accuracy = 0.0;
    // Binary problems only; zero otherwise.
    double sensitivity = 0.0;
    double specificity = 0.0;
    double auc = 0.0;
};

struct MetricAggregate {
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation across folds
};

// Everything one model evaluation produced, with the seeds and inputs echoed
// so a report is auditable on its own.
struct EvalReport {
    ModelSpec spec;
    std::vector<std::string> features;
    ResampleMode variant = ResampleMode::none;
    std::size_t fold_count = 0;
    std::uint64_t cv_seed = 0;
    std::uint64_t split_seed = 0;
    std::vector<std::uint64_t> fold_model_seeds;
    std::vector<std::uint64_t> fold_resample_seeds;
    ImputeScope impute_scope = ImputeScope::train_only;
    std::vector<int> classes; // ascending original labels
    bool binary = false;
    int positive_label = 1;
    std::vector<std::size_t> test_fold_sizes;

    std::vector<FoldMetrics> fold_metrics;
    MetricAggregate accuracy;
    MetricAggregate sensitivity; // binary only
    MetricAggregate specificity; // binary only
    MetricAggregate auc;         // binary only

    // Per fold: rows = true class index, columns = predicted class index,
    // both positions in `classes`.
    std::vector<std::vector<std::vector<std::size_t>>> confusion;
    std::vector<ConfusionCounts> binary_counts; // binary only

    std::vector<std::vector<RocPoint>> roc_per_fold; // binary only
    std::vector<RocPoint> roc_pooled;                // binary only
    double pooled_auc = 0.0;                         // binary only
};

// Stratified k-fold evaluation. Per fold: impute missing cells per
// `impute_scope`, resample the training rows only (held-out rows are never
// resampled), fit the model on the selected feature columns, then score the
// held-out rows. Binary problems report accuracy/sensitivity/specificity/AUC
// with per-fold and pooled ROC curves; problems with more classes report
// accuracy and confusion matrices only. Aggregates are mean and sample
// standard deviation across folds. Seeds: the split stream comes from
// options.seed, per-fold model streams from spec.seed, per-fold resampling
// streams from plan.seed — each independent of the others. Errors inside a
// fold are rethrown with the fold index prepended.
EvalReport cross_validate(const DataTable& table, const ModelSpec& spec,
                          const ResamplePlan& plan, const std::vector<std::string>& features,
                          const CvOptions& options = {});

} // namespace tabpred
