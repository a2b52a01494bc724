#include "tabpred/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "tabpred/error.hpp"

namespace tabpred {

BinaryMetrics binary_metrics(const ConfusionCounts& c) {
    if (c.total() == 0) throw Error("binary_metrics: no evaluated rows");
    if (c.tp + c.fn == 0) throw Error("binary_metrics: no positive rows, sensitivity undefined");
    if (c.tn + c.fp == 0) throw Error("binary_metrics: no negative rows, specificity undefined");
    BinaryMetrics m;
    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    m.sensitivity = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    m.specificity = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
    return m;
}

ConfusionCounts binary_confusion(const std::vector<int>& pred, const std::vector<int>& truth,
                                 int positive_label) {
    if (pred.size() != truth.size()) throw Error("binary_confusion: length mismatch");
    ConfusionCounts c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        bool p = pred[i] == positive_label;
        bool t = truth[i] == positive_label;
        if (p && t)
            ++c.tp;
        else if (!p && !t)
            ++c.tn;
        else if (p && !t)
            ++c.fp;
        else
            ++c.fn;
    }
    return c;
}

std::vector<RocPoint> roc_curve(const std::vector<double>& scores, const std::vector<int>& truth,
                                int positive_label) {
    if (scores.size() != truth.size()) throw Error("roc_curve: length mismatch");
    if (scores.empty()) throw Error("roc_curve: empty input");
    std::size_t pos = 0, neg = 0;
    for (int t : truth) (t == positive_label ? pos : neg) += 1;
    if (pos == 0 || neg == 0) throw Error("roc_curve: needs both classes present");

    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });

    std::vector<RocPoint> points;
    points.push_back({0.0, 0.0});
    std::size_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        double s = scores[order[i]];
        while (i < order.size() && scores[order[i]] == s) {
            if (truth[order[i]] == positive_label)
                ++tp;
            else
                ++fp;
            ++i;
        }
        points.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                          static_cast<double>(tp) / static_cast<double>(pos)});
    }
    return points;
}

double auc(const std::vector<RocPoint>& points) {
    if (points.size() < 2) throw Error("auc: needs at least two curve points");
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        double dx = points[i + 1].fpr - points[i].fpr;
        area += dx * (points[i].tpr + points[i + 1].tpr) / 2.0;
    }
    return area;
}

std::vector<std::vector<std::size_t>> confusion_matrix(const std::vector<int>& pred,
                                                       const std::vector<int>& truth,
                                                       std::size_t class_count) {
    if (pred.size() != truth.size()) throw Error("confusion_matrix: length mismatch");
    std::vector<std::vector<std::size_t>> m(class_count,
                                            std::vector<std::size_t>(class_count, 0));
    for (std::size_t i = 0; i < pred.size(); ++i) {
        int t = truth[i], p = pred[i];
        if (t < 0 || static_cast<std::size_t>(t) >= class_count || p < 0 ||
            static_cast<std::size_t>(p) >= class_count)
            throw Error("confusion_matrix: label outside the class range");
        ++m[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
    }
    return m;
}

double confusion_accuracy(const std::vector<std::vector<std::size_t>>& matrix) {
    std::size_t trace = 0, total = 0;
    for (std::size_t i = 0; i < matrix.size(); ++i)
        for (std::size_t j = 0; j < matrix[i].size(); ++j) {
            total += matrix[i][j];
            if (i == j) trace += matrix[i][j];
        }
    if (total == 0) throw Error("confusion_accuracy: empty matrix");
    return static_cast<double>(trace) / static_cast<double>(total);
}

std::pair<double, double> mean_and_stddev(const std::vector<double>& values) {
    if (values.empty()) throw Error("mean_and_stddev: empty input");
    double sum = 0.0;
    for (double v : values) sum += v;
    double mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

} // namespace tabpred
