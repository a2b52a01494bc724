#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tabpred/data_table.hpp"

namespace tabpred {

struct ImputerConfig {
    std::size_t k = 5; // donors averaged per missing cell, uniform weights
};

// Sets every missing cell of a boolean column to 0.5 (maximum-uncertainty
// value). Returns the number of cells filled. Runs before KNN imputation.
std::size_t fill_boolean(DataTable& table);

// Euclidean distance over the coordinates present in both rows, scaled up to
// the full dimension: sqrt(d / |P| * sum_{i in P} (a_i - b_i)^2) with d the
// column count and P the mutually present set. Throws Error when P is empty.
double nan_euclidean_distance(const std::vector<std::optional<double>>& a,
                              const std::vector<std::optional<double>>& b);
double nan_euclidean_distance(const DataTable& table, std::size_t row_a, std::size_t row_b);

struct ImputeStats {
    std::size_t knn_filled = 0;     // filled from donor averages
    std::size_t mean_fallbacks = 0; // no usable donor: column mean used
    std::size_t zero_fallbacks = 0; // column entirely missing: zero used

    std::size_t total() const { return knn_filled + mean_fallbacks + zero_fallbacks; }
};

// Fills every missing cell from the k nearest rows that have that column
// present, averaging their values. Distances use the table as it was on
// entry, so fill order cannot influence results. Rows whose distance is
// undefined (no mutually present column) are skipped as donors. Fewer than k
// usable donors: all of them are used; none: the donor-pool column mean;
// column entirely missing in the pool: 0.
ImputeStats knn_impute(DataTable& table, const ImputerConfig& config = {});

// Same fill rule, but donors come from a separate table (e.g. training rows
// only, so test rows never inform each other). Schemas must match.
ImputeStats knn_impute_from(DataTable& target, const DataTable& donors,
                            const ImputerConfig& config = {});

} // namespace tabpred
