#include "tabpred/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tabpred/error.hpp"
#include "tabpred/rng.hpp"

namespace tabpred {
namespace {

double impurity_of(const std::vector<double>& counts, double n, TreeConfig::Criterion criterion) {
    if (n <= 0.0) return 0.0;
    if (criterion == TreeConfig::Criterion::gini) {
        double sum_sq = 0.0;
        for (double c : counts) {
            double p = c / n;
            sum_sq += p * p;
        }
        return 1.0 - sum_sq;
    }
    double h = 0.0;
    for (double c : counts) {
        if (c <= 0.0) continue;
        double p = c / n;
        h -= p * std::log2(p);
    }
    return h;
}

struct SplitChoice {
    bool valid = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double gain = -1.0;
    double left_impurity = 0.0, right_impurity = 0.0;
    std::size_t left_n = 0, right_n = 0;
};

struct TreeBuilder {
    const Matrix& X;
    const std::vector<int>& y;
    std::size_t n_classes;
    const TreeConfig& config;
    std::vector<DecisionTree::Node>& nodes;
    std::vector<double>& importance;
    std::vector<std::uint64_t> name_hash;
    std::vector<std::size_t> walk_order_buf;
    double total_n = 0.0;

    // Features in ascending hash order for this node; the hash mixes the
    // tree key, the node id and the feature name, so the order is random
    // per node yet invariant under column permutation.
    void node_walk_order(std::uint64_t node_id, std::vector<std::size_t>& order) {
        const std::size_t d = X.cols;
        order.resize(d);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::vector<std::uint64_t> keys(d);
        for (std::size_t f = 0; f < d; ++f)
            keys[f] = rng::mix(config.tree_key, node_id, name_hash[f]);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (keys[a] != keys[b]) return keys[a] < keys[b];
            return name_hash[a] < name_hash[b];
        });
    }

    void try_best_split(const std::vector<std::size_t>& rows, std::size_t f,
                        const std::vector<double>& counts, double node_impurity,
                        SplitChoice& best) {
        std::vector<std::size_t> order(rows);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return X(a, f) < X(b, f);
        });
        const double n = static_cast<double>(rows.size());
        std::vector<double> left_counts(n_classes, 0.0), right_counts(n_classes, 0.0);
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            left_counts[static_cast<std::size_t>(y[order[i]])] += 1.0;
            double v = X(order[i], f);
            double next = X(order[i + 1], f);
            if (v == next) continue;
            std::size_t left_n = i + 1;
            std::size_t right_n = order.size() - left_n;
            if (left_n < config.min_samples_leaf || right_n < config.min_samples_leaf) continue;
            double threshold = (v + next) / 2.0;
            if (threshold >= next) threshold = v; // keep the boundary between the two values
            for (std::size_t c = 0; c < n_classes; ++c) right_counts[c] = counts[c] - left_counts[c];
            double li = impurity_of(left_counts, static_cast<double>(left_n), config.criterion);
            double ri = impurity_of(right_counts, static_cast<double>(right_n), config.criterion);
            double gain = node_impurity - (static_cast<double>(left_n) / n) * li -
                          (static_cast<double>(right_n) / n) * ri;
            if (gain > best.gain) {
                best = {true, f, threshold, gain, li, ri, left_n, right_n};
            }
        }
    }

    void try_random_split(const std::vector<std::size_t>& rows, std::size_t f, double lo, double hi,
                          std::uint64_t node_id, double node_impurity, SplitChoice& best) {
        rng::Engine eng(rng::mix(config.tree_key, node_id, name_hash[f]));
        double threshold = eng.uniform(lo, hi);
        if (threshold >= hi) threshold = lo; // guard against rounding to the open end
        std::vector<double> left_counts(n_classes, 0.0), right_counts(n_classes, 0.0);
        std::size_t left_n = 0;
        for (std::size_t r : rows) {
            if (X(r, f) <= threshold) {
                left_counts[static_cast<std::size_t>(y[r])] += 1.0;
                ++left_n;
            } else {
                right_counts[static_cast<std::size_t>(y[r])] += 1.0;
            }
        }
        std::size_t right_n = rows.size() - left_n;
        if (left_n < config.min_samples_leaf || right_n < config.min_samples_leaf) return;
        const double n = static_cast<double>(rows.size());
        double li = impurity_of(left_counts, static_cast<double>(left_n), config.criterion);
        double ri = impurity_of(right_counts, static_cast<double>(right_n), config.criterion);
        double gain = node_impurity - (static_cast<double>(left_n) / n) * li -
                      (static_cast<double>(right_n) / n) * ri;
        if (gain > best.gain) {
            best = {true, f, threshold, gain, li, ri, left_n, right_n};
        }
    }

    std::uint32_t build(std::vector<std::size_t>& rows, int depth) {
        const std::uint32_t id = static_cast<std::uint32_t>(nodes.size());
        nodes.emplace_back();
        const double n = static_cast<double>(rows.size());

        std::vector<double> counts(n_classes, 0.0);
        for (std::size_t r : rows) counts[static_cast<std::size_t>(y[r])] += 1.0;
        double node_impurity = impurity_of(counts, n, config.criterion);
        nodes[id].impurity = node_impurity;
        nodes[id].n_samples = rows.size();
        nodes[id].class_counts = counts;

        bool can_split = node_impurity > 0.0 && rows.size() >= config.min_samples_split &&
                         (config.max_depth < 0 || depth < config.max_depth);
        SplitChoice best;
        if (can_split) {
            node_walk_order(id, walk_order_buf);
            std::vector<std::size_t> order = walk_order_buf;
            const std::size_t budget = config.max_features == 0 ? X.cols : config.max_features;
            std::size_t evaluated = 0;
            for (std::size_t f : order) {
                if (evaluated == budget) break;
                double lo = std::numeric_limits<double>::infinity();
                double hi = -std::numeric_limits<double>::infinity();
                for (std::size_t r : rows) {
                    lo = std::min(lo, X(r, f));
                    hi = std::max(hi, X(r, f));
                }
                if (!(lo < hi)) continue; // constant here: not a usable candidate
                ++evaluated;
                if (config.splitter == TreeConfig::Splitter::best)
                    try_best_split(rows, f, counts, node_impurity, best);
                else
                    try_random_split(rows, f, lo, hi, id, node_impurity, best);
            }
        }

        if (!best.valid) return id; // leaf

        importance[best.feature] +=
            (n * node_impurity - static_cast<double>(best.left_n) * best.left_impurity -
             static_cast<double>(best.right_n) * best.right_impurity) /
            total_n;

        std::vector<std::size_t> left_rows, right_rows;
        left_rows.reserve(best.left_n);
        right_rows.reserve(best.right_n);
        for (std::size_t r : rows) {
            if (X(r, best.feature) <= best.threshold)
                left_rows.push_back(r);
            else
                right_rows.push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        nodes[id].feature = static_cast<int>(best.feature);
        nodes[id].threshold = best.threshold;
        std::uint32_t left = build(left_rows, depth + 1);
        std::uint32_t right = build(right_rows, depth + 1);
        nodes[id].left = left;
        nodes[id].right = right;
        return id;
    }
};

} // namespace

void DecisionTree::fit(const Matrix& X, const std::vector<int>& y, std::size_t n_classes,
                       const std::vector<std::string>& feature_names, const TreeConfig& config,
                       const std::vector<std::size_t>& rows) {
    if (X.rows != y.size()) throw Error("decision tree: row/label count mismatch");
    if (feature_names.size() != X.cols) throw Error("decision tree: feature name count mismatch");
    if (X.rows == 0) throw Error("decision tree: empty training set");
    if (n_classes == 0) throw Error("decision tree: need at least one class");
    for (int label : y)
        if (label < 0 || static_cast<std::size_t>(label) >= n_classes)
            throw Error("decision tree: class index out of range");

    nodes_.clear();
    n_classes_ = n_classes;
    importance_.assign(X.cols, 0.0);

    TreeBuilder builder{X, y, n_classes, config, nodes_, importance_, {}, {}, 0.0};
    builder.name_hash.resize(X.cols);
    for (std::size_t f = 0; f < X.cols; ++f)
        builder.name_hash[f] = rng::hash_string(feature_names[f]);

    std::vector<std::size_t> root_rows;
    if (rows.empty()) {
        root_rows.resize(X.rows);
        std::iota(root_rows.begin(), root_rows.end(), std::size_t{0});
    } else {
        for (std::size_t r : rows)
            if (r >= X.rows) throw Error("decision tree: sample row out of range");
        root_rows = rows;
    }
    builder.total_n = static_cast<double>(root_rows.size());
    builder.build(root_rows, 0);
}

std::vector<double> DecisionTree::class_frequencies(std::span<const double> row) const {
    if (nodes_.empty()) throw Error("decision tree: not fitted");
    std::uint32_t at = 0;
    while (nodes_[at].feature >= 0) {
        const Node& node = nodes_[at];
        at = row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
    }
    const Node& leaf = nodes_[at];
    std::vector<double> freq(n_classes_, 0.0);
    double n = static_cast<double>(leaf.n_samples);
    for (std::size_t c = 0; c < n_classes_; ++c) freq[c] = leaf.class_counts[c] / n;
    return freq;
}

namespace {

struct RegressionBuilder {
    const Matrix& X;
    const std::vector<double>& target;
    const RegressionTreeConfig& config;
    const RegressionTree::LeafValue& leaf_value;
    std::vector<RegressionTree::Node>& nodes;

    std::uint32_t build(std::vector<std::size_t>& rows, int depth) {
        const std::uint32_t id = static_cast<std::uint32_t>(nodes.size());
        nodes.emplace_back();

        bool can_split = rows.size() >= config.min_samples_split &&
                         (config.max_depth < 0 || depth < config.max_depth);

        bool found = false;
        std::size_t best_feature = 0;
        double best_threshold = 0.0;
        double best_child_sse = std::numeric_limits<double>::infinity();
        if (can_split) {
            for (std::size_t f = 0; f < X.cols; ++f) {
                std::vector<std::size_t> order(rows);
                std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                    return X(a, f) < X(b, f);
                });
                double sum_left = 0.0, sq_left = 0.0;
                double sum_total = 0.0, sq_total = 0.0;
                for (std::size_t r : order) {
                    sum_total += target[r];
                    sq_total += target[r] * target[r];
                }
                for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                    double t = target[order[i]];
                    sum_left += t;
                    sq_left += t * t;
                    double v = X(order[i], f);
                    double next = X(order[i + 1], f);
                    if (v == next) continue;
                    std::size_t left_n = i + 1;
                    std::size_t right_n = order.size() - left_n;
                    if (left_n < config.min_samples_leaf || right_n < config.min_samples_leaf)
                        continue;
                    double threshold = (v + next) / 2.0;
                    if (threshold >= next) threshold = v;
                    double sse_left = sq_left - sum_left * sum_left / static_cast<double>(left_n);
                    double sum_right = sum_total - sum_left;
                    double sse_right = (sq_total - sq_left) -
                                       sum_right * sum_right / static_cast<double>(right_n);
                    double child_sse = sse_left + sse_right;
                    if (child_sse < best_child_sse) {
                        best_child_sse = child_sse;
                        best_feature = f;
                        best_threshold = threshold;
                        found = true;
                    }
                }
            }
        }

        if (!found) {
            nodes[id].value = leaf_value(rows);
            return id;
        }

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows) {
            if (X(r, best_feature) <= best_threshold)
                left_rows.push_back(r);
            else
                right_rows.push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        nodes[id].feature = static_cast<int>(best_feature);
        nodes[id].threshold = best_threshold;
        std::uint32_t left = build(left_rows, depth + 1);
        std::uint32_t right = build(right_rows, depth + 1);
        nodes[id].left = left;
        nodes[id].right = right;
        return id;
    }
};

} // namespace

void RegressionTree::fit(const Matrix& X, const std::vector<double>& target,
                         const RegressionTreeConfig& config, const LeafValue& leaf_value) {
    if (X.rows != target.size()) throw Error("regression tree: row/target count mismatch");
    if (X.rows == 0) throw Error("regression tree: empty training set");
    nodes_.clear();
    std::vector<std::size_t> rows(X.rows);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    RegressionBuilder builder{X, target, config, leaf_value, nodes_};
    builder.build(rows, 0);
}

double RegressionTree::predict(std::span<const double> row) const {
    if (nodes_.empty()) throw Error("regression tree: not fitted");
    std::uint32_t at = 0;
    while (nodes_[at].feature >= 0) {
        const Node& node = nodes_[at];
        at = row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
    }
    return nodes_[at].value;
}

} // namespace tabpred
