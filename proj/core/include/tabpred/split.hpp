#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tabpred/data_table.hpp"

namespace tabpred {

struct SplitPlan {
    std::size_t k = 0;
    std::vector<std::size_t> fold_of; // per row, values in [0, k)

    std::vector<std::size_t> test_rows(std::size_t fold) const;
    std::vector<std::size_t> train_rows(std::size_t fold) const;
    std::vector<std::size_t> fold_sizes() const;
};

// Stratified assignment: within each class the rows are shuffled with a
// per-class stream derived from `seed`, each fold gets count/k of them, and
// the remainders go one by one to the currently smallest fold (ties resolved
// toward the lower fold index). Overall fold sizes differ by at most one and
// per-class counts per fold differ by at most one.
SplitPlan split_stratified(const std::vector<int>& labels, std::size_t k, std::uint64_t seed);

// Two-sample Kolmogorov-Smirnov statistic: the largest gap between the two
// empirical CDFs. Throws Error when either sample is empty.
double ks_statistic(std::vector<double> a, std::vector<double> b);

struct FoldDivergence {
    std::size_t fold = 0;
    std::vector<double> ks_by_column; // schema order
};

// Per fold, the KS statistic between train-side and test-side values of each
// column. Missing cells are skipped; a side with no present values throws.
std::vector<FoldDivergence> split_divergence(const DataTable& table, const SplitPlan& plan);

} // namespace tabpred
