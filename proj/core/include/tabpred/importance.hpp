#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tabpred/data_table.hpp"

namespace tabpred {

enum class ImportanceMethod { extra_trees, random_forest };

std::string to_string(ImportanceMethod method);
ImportanceMethod importance_method_from_string(const std::string& text);

struct ImportanceVector {
    ImportanceMethod method = ImportanceMethod::extra_trees;
    std::uint64_t seed = 0;
    std::size_t tree_count = 0;
    // Sorted by importance descending, ties by feature name ascending.
    std::vector<std::pair<std::string, double>> entries;
};

// Mean decrease in Gini impurity across a forest of `tree_count` unlimited-
// depth trees, normalized to sum 1 (all zeros when nothing ever split).
// extra_trees draws one uniform threshold per candidate; random_forest scans
// for the best threshold. Both pick from per-node candidate subsets of size
// ceil(sqrt(feature count)). Requires a dense labeled table.
ImportanceVector impurity_importance(const DataTable& table, ImportanceMethod method,
                                     std::size_t tree_count, std::uint64_t seed);

// First k names of the ranking; k must not exceed the feature count.
std::vector<std::string> select_top_k(const ImportanceVector& importance, std::size_t k);

} // namespace tabpred
