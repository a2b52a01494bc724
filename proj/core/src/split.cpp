#include "tabpred/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tabpred/error.hpp"
#include "tabpred/rng.hpp"

namespace tabpred {

std::vector<std::size_t> SplitPlan::test_rows(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < fold_of.size(); ++r)
        if (fold_of[r] == fold) out.push_back(r);
    return out;
}

std::vector<std::size_t> SplitPlan::train_rows(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < fold_of.size(); ++r)
        if (fold_of[r] != fold) out.push_back(r);
    return out;
}

std::vector<std::size_t> SplitPlan::fold_sizes() const {
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t f : fold_of) ++sizes[f];
    return sizes;
}

SplitPlan split_stratified(const std::vector<int>& labels, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ValidationError("stratified split needs k >= 2");
    if (labels.empty()) throw ValidationError("stratified split needs at least one row");
    if (k > labels.size())
        throw ValidationError("stratified split: k exceeds the number of rows");

    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t r = 0; r < labels.size(); ++r) by_class[labels[r]].push_back(r);

    SplitPlan plan;
    plan.k = k;
    plan.fold_of.assign(labels.size(), 0);
    std::vector<std::size_t> fold_size(k, 0);

    for (auto& [label, rows] : by_class) {
        rng::Engine eng(rng::mix(seed, static_cast<std::uint64_t>(static_cast<std::int64_t>(label))));
        eng.shuffle(rows);

        std::size_t base = rows.size() / k;
        std::size_t next = 0;
        for (std::size_t f = 0; f < k; ++f)
            for (std::size_t i = 0; i < base; ++i) {
                plan.fold_of[rows[next++]] = f;
                ++fold_size[f];
            }
        // Leftovers go to the smallest folds so overall sizes stay within one.
        while (next < rows.size()) {
            std::size_t target = 0;
            for (std::size_t f = 1; f < k; ++f)
                if (fold_size[f] < fold_size[target]) target = f;
            plan.fold_of[rows[next++]] = target;
            ++fold_size[target];
        }
    }
    return plan;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw Error("ks_statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

std::vector<FoldDivergence> split_divergence(const DataTable& table, const SplitPlan& plan) {
    if (table.n_rows() != plan.fold_of.size())
        throw Error("split_divergence: plan does not match the table");
    std::vector<FoldDivergence> out;
    for (std::size_t f = 0; f < plan.k; ++f) {
        FoldDivergence fd;
        fd.fold = f;
        fd.ks_by_column.resize(table.n_cols());
        for (std::size_t c = 0; c < table.n_cols(); ++c) {
            std::vector<double> train, test;
            for (std::size_t r = 0; r < table.n_rows(); ++r) {
                const auto& v = table.cell(r, c);
                if (!v) continue;
                (plan.fold_of[r] == f ? test : train).push_back(*v);
            }
            fd.ks_by_column[c] = ks_statistic(std::move(train), std::move(test));
        }
        out.push_back(std::move(fd));
    }
    return out;
}

} // namespace tabpred
