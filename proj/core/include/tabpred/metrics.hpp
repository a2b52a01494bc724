#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace tabpred {

struct ConfusionCounts {
    std::size_t tp = 0, tn = 0, fp = 0, fn = 0;

    std::size_t total() const { return tp + tn + fp + fn; }
    bool operator==(const ConfusionCounts&) const = default;
};

struct BinaryMetrics {
    double accuracy = 0.0;
    double sensitivity = 0.0; // true-positive rate
    double specificity = 0.0; // true-negative rate
};

// accuracy = (tp+tn)/total, sensitivity = tp/(tp+fn), specificity =
// tn/(tn+fp). Throws Error when a denominator is empty (that rate would be
// undefined).
BinaryMetrics binary_metrics(const ConfusionCounts& c);

// Tally predictions against truth; labels not equal to positive_label count
// as negative.
ConfusionCounts binary_confusion(const std::vector<int>& pred, const std::vector<int>& truth,
                                 int positive_label = 1);

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    bool operator==(const RocPoint&) const = default;
};

// Threshold sweep over distinct scores descending; tied scores collapse into
// a single step. Always starts at (0,0) and ends at (1,1). Requires both
// classes present.
std::vector<RocPoint> roc_curve(const std::vector<double>& scores, const std::vector<int>& truth,
                                int positive_label = 1);

// Trapezoidal area under a ROC curve. Equals the pairwise ranking statistic
// (wins + half-ties) / (P*N) for the scores the curve came from.
double auc(const std::vector<RocPoint>& points);

// Row = truth class, column = predicted class; throws when a label falls
// outside [0, class_count).
std::vector<std::vector<std::size_t>> confusion_matrix(const std::vector<int>& pred,
                                                       const std::vector<int>& truth,
                                                       std::size_t class_count);

// trace / total of a square count matrix.
double confusion_accuracy(const std::vector<std::vector<std::size_t>>& matrix);

// Mean and sample standard deviation (n-1 denominator; 0 when n < 2).
std::pair<double, double> mean_and_stddev(const std::vector<double>& values);

} // namespace tabpred
