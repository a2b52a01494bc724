#include "tabpred/impute.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <tuple>

#include "tabpred/error.hpp"
#include "tabpred/parallel.hpp"

namespace tabpred {
namespace {

std::optional<double> masked_distance(const DataTable& a_table, std::size_t a_row,
                                      const DataTable& b_table, std::size_t b_row) {
    const std::size_t d = a_table.n_cols();
    double sum = 0.0;
    std::size_t present = 0;
    for (std::size_t c = 0; c < d; ++c) {
        const auto& a = a_table.cell(a_row, c);
        const auto& b = b_table.cell(b_row, c);
        if (!a || !b) continue;
        double diff = *a - *b;
        sum += diff * diff;
        ++present;
    }
    if (present == 0) return std::nullopt;
    return std::sqrt(sum * static_cast<double>(d) / static_cast<double>(present));
}

// Donor pool column means and all-missing flags, computed once.
struct PoolStats {
    std::vector<double> mean;
    std::vector<bool> all_missing;
};

PoolStats pool_stats(const DataTable& pool) {
    PoolStats s;
    s.mean.resize(pool.n_cols(), 0.0);
    s.all_missing.resize(pool.n_cols(), false);
    for (std::size_t c = 0; c < pool.n_cols(); ++c) {
        auto m = pool.column_mean(c);
        if (m)
            s.mean[c] = *m;
        else
            s.all_missing[c] = true;
    }
    return s;
}

ImputeStats impute_into(DataTable& target, const DataTable& donors, const ImputerConfig& config) {
    if (!(target.schema() == donors.schema()))
        throw Error("knn imputation: target and donor schemas differ");
    if (config.k == 0) throw ValidationError("knn imputation needs k >= 1");

    const PoolStats stats = pool_stats(donors);
    std::atomic<std::size_t> knn_filled{0}, mean_fallbacks{0}, zero_fallbacks{0};

    parallel_for(target.n_rows(), [&](std::size_t r) {
        bool any_missing = false;
        for (std::size_t c = 0; c < target.n_cols() && !any_missing; ++c)
            if (!target.cell(r, c)) any_missing = true;
        if (!any_missing) return;

        // One distance per donor row, shared by every missing cell of row r.
        std::vector<std::optional<double>> dist(donors.n_rows());
        for (std::size_t dr = 0; dr < donors.n_rows(); ++dr)
            dist[dr] = masked_distance(target, r, donors, dr);

        using Entry = std::tuple<double, RowId, std::size_t>;
        std::vector<Entry> eligible;
        for (std::size_t c = 0; c < target.n_cols(); ++c) {
            if (target.cell(r, c)) continue;
            if (stats.all_missing[c]) {
                target.set_cell(r, c, 0.0);
                ++zero_fallbacks;
                continue;
            }
            eligible.clear();
            for (std::size_t dr = 0; dr < donors.n_rows(); ++dr)
                if (dist[dr] && donors.cell(dr, c))
                    eligible.emplace_back(*dist[dr], donors.row_id(dr), dr);
            if (eligible.empty()) {
                target.set_cell(r, c, stats.mean[c]);
                ++mean_fallbacks;
                continue;
            }
            std::size_t take = std::min(config.k, eligible.size());
            std::nth_element(eligible.begin(), eligible.begin() + (take - 1), eligible.end());
            // Accumulate in (distance, id, position) order so the filled
            // value is one specific floating-point sum, not whatever partial
            // order nth_element happened to leave.
            std::sort(eligible.begin(), eligible.begin() + static_cast<std::ptrdiff_t>(take));
            double sum = 0.0;
            for (std::size_t i = 0; i < take; ++i)
                sum += *donors.cell(std::get<2>(eligible[i]), c);
            target.set_cell(r, c, sum / static_cast<double>(take));
            ++knn_filled;
        }
    });

    ImputeStats out;
    out.knn_filled = knn_filled.load();
    out.mean_fallbacks = mean_fallbacks.load();
    out.zero_fallbacks = zero_fallbacks.load();
    return out;
}

} // namespace

std::size_t fill_boolean(DataTable& table) {
    std::size_t filled = 0;
    for (std::size_t c = 0; c < table.n_cols(); ++c) {
        if (table.schema().column(c).kind != ColumnKind::boolean) continue;
        for (std::size_t r = 0; r < table.n_rows(); ++r)
            if (!table.cell(r, c)) {
                table.set_cell(r, c, 0.5);
                ++filled;
            }
    }
    return filled;
}

double nan_euclidean_distance(const std::vector<std::optional<double>>& a,
                              const std::vector<std::optional<double>>& b) {
    if (a.size() != b.size()) throw Error("nan_euclidean_distance: dimension mismatch");
    const std::size_t d = a.size();
    double sum = 0.0;
    std::size_t present = 0;
    for (std::size_t c = 0; c < d; ++c) {
        if (!a[c] || !b[c]) continue;
        double diff = *a[c] - *b[c];
        sum += diff * diff;
        ++present;
    }
    if (present == 0) throw Error("nan_euclidean_distance: no mutually present coordinate");
    return std::sqrt(sum * static_cast<double>(d) / static_cast<double>(present));
}

double nan_euclidean_distance(const DataTable& table, std::size_t row_a, std::size_t row_b) {
    auto d = masked_distance(table, row_a, table, row_b);
    if (!d) throw Error("nan_euclidean_distance: no mutually present coordinate");
    return *d;
}

ImputeStats knn_impute(DataTable& table, const ImputerConfig& config) {
    const DataTable snapshot = table;
    return impute_into(table, snapshot, config);
}

ImputeStats knn_impute_from(DataTable& target, const DataTable& donors,
                            const ImputerConfig& config) {
    return impute_into(target, donors, config);
}

} // namespace tabpred
