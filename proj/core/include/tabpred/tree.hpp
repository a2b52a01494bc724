#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tabpred/linalg.hpp"

namespace tabpred {

struct TreeConfig {
    enum class Criterion { gini, entropy };
    enum class Splitter { best, random };

    Criterion criterion = Criterion::gini;
    Splitter splitter = Splitter::best;
    int max_depth = -1;                // -1 = unlimited
    std::size_t min_samples_split = 2; // below this a node stays a leaf
    std::size_t min_samples_leaf = 1;  // both children must keep at least this
    std::size_t max_features = 0;      // candidate features per node; 0 = all
    std::uint64_t tree_key = 0;        // stream key for all in-tree randomness
};

// Axis-aligned classification tree. All per-node randomness (candidate
// order, random thresholds) is keyed on the feature NAME hash together with
// the tree key and node id, never on the column position — so permuting
// columns permutes the fitted tree identically. Candidate walk: features are
// ranked by that hash and visited in rank order until `max_features` usable
// (non-constant within the node) candidates have been evaluated; the best
// gain wins, ties going to the earlier-visited candidate.
class DecisionTree {
public:
    struct Node {
        int feature = -1; // -1 = leaf
        double threshold = 0.0;
        std::uint32_t left = 0;
        std::uint32_t right = 0;
        double impurity = 0.0;
        std::size_t n_samples = 0;
        std::vector<double> class_counts;
    };

    // y holds class indices in [0, n_classes). `rows` selects the training
    // multiset (repeats allowed, e.g. a bootstrap draw); empty = all rows.
    void fit(const Matrix& X, const std::vector<int>& y, std::size_t n_classes,
             const std::vector<std::string>& feature_names, const TreeConfig& config,
             const std::vector<std::size_t>& rows = {});

    // Leaf class frequencies for one row; entries sum to 1.
    std::vector<double> class_frequencies(std::span<const double> row) const;

    // Sum of weighted impurity decreases per feature (unnormalized).
    const std::vector<double>& importance() const { return importance_; }

    const std::vector<Node>& nodes() const { return nodes_; }
    // Split feature of the root, or -1 when the tree is a single leaf.
    int root_split_feature() const { return nodes_.empty() ? -1 : nodes_[0].feature; }

private:
    std::vector<Node> nodes_;
    std::vector<double> importance_;
    std::size_t n_classes_ = 0;
};

struct RegressionTreeConfig {
    int max_depth = 2;
    std::size_t min_samples_split = 5;
    std::size_t min_samples_leaf = 4;
};

// Variance-reduction regression tree over all features (no randomness).
// Leaf values come from a caller-supplied functional of the leaf's row set,
// so boosting can install Newton-step values instead of plain means.
class RegressionTree {
public:
    using LeafValue = std::function<double(const std::vector<std::size_t>&)>;

    void fit(const Matrix& X, const std::vector<double>& target,
             const RegressionTreeConfig& config, const LeafValue& leaf_value);

    double predict(std::span<const double> row) const;

    struct Node {
        int feature = -1;
        double threshold = 0.0;
        std::uint32_t left = 0;
        std::uint32_t right = 0;
        double value = 0.0;
    };
    const std::vector<Node>& nodes() const { return nodes_; }

private:
    std::vector<Node> nodes_;
};

} // namespace tabpred
