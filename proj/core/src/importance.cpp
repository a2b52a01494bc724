#include "tabpred/importance.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tabpred/error.hpp"
#include "tabpred/parallel.hpp"
#include "tabpred/rng.hpp"
#include "tabpred/tree.hpp"

namespace tabpred {

std::string to_string(ImportanceMethod method) {
    switch (method) {
    case ImportanceMethod::extra_trees: return "extra_trees";
    case ImportanceMethod::random_forest: return "random_forest";
    }
    throw Error("invalid importance method");
}

ImportanceMethod importance_method_from_string(const std::string& text) {
    if (text == "extra_trees") return ImportanceMethod::extra_trees;
    if (text == "random_forest") return ImportanceMethod::random_forest;
    throw ValidationError("unknown importance method '" + text +
                          "' (expected extra_trees or random_forest)");
}

ImportanceVector impurity_importance(const DataTable& table, ImportanceMethod method,
                                     std::size_t tree_count, std::uint64_t seed) {
    if (!table.has_labels()) throw ValidationError("feature ranking needs a labeled table");
    if (table.n_rows() == 0) throw ValidationError("feature ranking needs at least one row");
    if (tree_count == 0) throw ValidationError("feature ranking needs at least one tree");

    const Matrix X = table.to_matrix();
    const std::size_t d = X.cols;

    std::map<int, int> class_index;
    for (int label : table.distinct_labels())
        class_index.emplace(label, static_cast<int>(class_index.size()));
    std::vector<int> y(table.n_rows());
    for (std::size_t r = 0; r < table.n_rows(); ++r) y[r] = class_index.at(table.label(r));

    std::vector<std::string> names;
    for (const auto& col : table.schema().columns()) names.push_back(col.name);

    TreeConfig config;
    config.criterion = TreeConfig::Criterion::gini;
    config.splitter = method == ImportanceMethod::extra_trees ? TreeConfig::Splitter::random
                                                              : TreeConfig::Splitter::best;
    config.max_features =
        static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));

    // Per-tree normalized importances, built in parallel and then combined
    // in fixed tree order so thread count cannot change the result.
    std::vector<std::vector<double>> per_tree(tree_count);
    parallel_for(tree_count, [&](std::size_t t) {
        TreeConfig tree_config = config;
        tree_config.tree_key = rng::mix(seed, t);
        DecisionTree tree;
        tree.fit(X, y, class_index.size(), names, tree_config);
        std::vector<double> imp = tree.importance();
        double sum = 0.0;
        for (double v : imp) sum += v;
        if (sum > 0.0)
            for (double& v : imp) v /= sum;
        per_tree[t] = std::move(imp);
    });

    std::vector<double> mean(d, 0.0);
    for (std::size_t t = 0; t < tree_count; ++t)
        for (std::size_t f = 0; f < d; ++f) mean[f] += per_tree[t][f];
    double total = 0.0;
    for (double v : mean) total += v;
    if (total > 0.0)
        for (double& v : mean) v /= total;

    ImportanceVector out;
    out.method = method;
    out.seed = seed;
    out.tree_count = tree_count;
    for (std::size_t f = 0; f < d; ++f) out.entries.emplace_back(names[f], mean[f]);
    std::sort(out.entries.begin(), out.entries.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

std::vector<std::string> select_top_k(const ImportanceVector& importance, std::size_t k) {
    if (k == 0) throw ValidationError("top-k selection needs k >= 1");
    if (k > importance.entries.size())
        throw ValidationError("top-k selection: k exceeds the feature count");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < k; ++i) out.push_back(importance.entries[i].first);
    return out;
}

} // namespace tabpred
