#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "tabpred/error.hpp"
#include "tabpred/rng.hpp"
#include "tabpred/split.hpp"

using namespace tabpred;

namespace {

// Largest empirical-CDF gap by direct evaluation at every sample point.
double ks_oracle(const std::vector<double>& a, const std::vector<double>& b) {
    auto cdf = [](const std::vector<double>& v, double x) {
        std::size_t n = 0;
        for (double value : v)
            if (value <= x) ++n;
        return static_cast<double>(n) / static_cast<double>(v.size());
    };
    double best = 0.0;
    for (const std::vector<double>* side : {&a, &b})
        for (double x : *side) best = std::max(best, std::abs(cdf(a, x) - cdf(b, x)));
    return best;
}

} // namespace

TEST_CASE("stratified split partitions rows with balanced classes") {
    rng::Engine eng(3);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 20 + eng.below(200);
        std::size_t k = 2 + eng.below(6);
        std::vector<int> labels(n);
        for (auto& l : labels) l = static_cast<int>(eng.below(3));
        // guarantee every class has at least one row
        labels[0] = 0;
        labels[1 % n] = 1;
        labels[2 % n] = 2;

        SplitPlan plan = split_stratified(labels, k, 1000 + trial);
        REQUIRE(plan.fold_of.size() == n);
        for (std::size_t f : plan.fold_of) REQUIRE(f < k);

        // fold sizes differ by at most one
        std::vector<std::size_t> sizes = plan.fold_sizes();
        auto [mn, mx] = std::minmax_element(sizes.begin(), sizes.end());
        CHECK(*mx - *mn <= 1);

        // per-class counts differ by at most one across folds
        for (int cls : {0, 1, 2}) {
            std::vector<std::size_t> per_fold(k, 0);
            for (std::size_t r = 0; r < n; ++r)
                if (labels[r] == cls) ++per_fold[plan.fold_of[r]];
            auto [cmn, cmx] = std::minmax_element(per_fold.begin(), per_fold.end());
            CHECK(*cmx - *cmn <= 1);
        }

        // test rows of all folds partition the row set
        std::set<std::size_t> seen;
        for (std::size_t f = 0; f < k; ++f) {
            for (std::size_t r : plan.test_rows(f)) seen.insert(r);
            std::vector<std::size_t> train = plan.train_rows(f);
            CHECK(train.size() + plan.test_rows(f).size() == n);
        }
        CHECK(seen.size() == n);
    }
}

TEST_CASE("five folds of 1384 rows with 260 positives give 277/276 test sizes") {
    std::vector<int> labels(1384, 0);
    for (std::size_t i = 0; i < 260; ++i) labels[i * 5] = 1;
    SplitPlan plan = split_stratified(labels, 5, 2024);

    std::vector<std::size_t> sizes = plan.fold_sizes();
    std::multiset<std::size_t> got(sizes.begin(), sizes.end());
    CHECK(got == std::multiset<std::size_t>{276, 277, 277, 277, 277});

    for (std::size_t f = 0; f < 5; ++f) {
        std::size_t minority = 0;
        for (std::size_t r : plan.test_rows(f)) minority += labels[r] == 1 ? 1 : 0;
        CHECK(minority == 52); // 260 positives split evenly over 5 folds
    }
}

TEST_CASE("split assignment is seed-deterministic") {
    std::vector<int> labels(300);
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i % 2;
    SplitPlan a = split_stratified(labels, 5, 7);
    SplitPlan b = split_stratified(labels, 5, 7);
    SplitPlan c = split_stratified(labels, 5, 8);
    CHECK(a.fold_of == b.fold_of);
    CHECK(a.fold_of != c.fold_of);
}

TEST_CASE("class remainders favor the emptier, lower-indexed folds") {
    std::vector<int> labels(3, 0);
    SplitPlan plan = split_stratified(labels, 2, 5);
    CHECK(plan.fold_sizes() == std::vector<std::size_t>{2, 1});
}

TEST_CASE("split rejects invalid fold counts") {
    std::vector<int> labels{0, 1, 0, 1};
    CHECK_THROWS_AS(split_stratified(labels, 0, 1), ValidationError);
    CHECK_THROWS_AS(split_stratified(labels, 5, 1), ValidationError); // more folds than rows
    CHECK_THROWS_AS(split_stratified({}, 2, 1), ValidationError);
}

TEST_CASE("ks statistic matches hand-computed cases") {
    CHECK(ks_statistic({1, 2, 3}, {1, 2, 3}) == 0.0);
    CHECK(ks_statistic({0, 0, 0}, {5, 5}) == 1.0);
    CHECK(ks_statistic({1, 2, 3}, {1, 2, 4}) == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(ks_statistic({}, {1.0}), Error);
    CHECK_THROWS_AS(ks_statistic({1.0}, {}), Error);
}

TEST_CASE("ks statistic equals the direct CDF-gap scan on random samples") {
    rng::Engine eng(17);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a(1 + eng.below(12)), b(1 + eng.below(12));
        for (auto& x : a) x = eng.below(6) * 0.5; // ties across and within samples
        for (auto& x : b) x = eng.below(6) * 0.5;
        CHECK(ks_statistic(a, b) == doctest::Approx(ks_oracle(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("split divergence reports one statistic per fold and column") {
    rng::Engine eng(23);
    DataTable table = testutil::random_table(eng, 60, 3, 0.1);
    SplitPlan plan = split_stratified(table.labels(), 4, 9);
    auto div = split_divergence(table, plan);
    REQUIRE(div.size() == 4);
    for (std::size_t f = 0; f < 4; ++f) {
        CHECK(div[f].fold == f);
        REQUIRE(div[f].ks_by_column.size() == 3);
        for (double v : div[f].ks_by_column) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}
