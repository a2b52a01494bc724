#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "tabpred/error.hpp"
#include "tabpred/rebalance.hpp"
#include "tabpred/rng.hpp"

using namespace tabpred;
using testutil::Cell;

namespace {

DataTable random_labeled(rng::Engine& eng, std::size_t rows, int classes) {
    std::vector<testutil::Row> cells(rows, testutil::Row(2));
    std::vector<int> labels(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        cells[r][0] = eng.uniform(-1, 1);
        cells[r][1] = eng.uniform(-1, 1);
        labels[r] = static_cast<int>(eng.below(static_cast<std::uint64_t>(classes)));
    }
    // make sure every class occurs
    for (int c = 0; c < classes; ++c) labels[static_cast<std::size_t>(c) % rows] = c;
    return testutil::make_table(testutil::continuous_schema(2), cells, labels);
}

// Multiset of (origin id, cell values, label) for containment checks.
std::multiset<std::tuple<std::size_t, double, double, int>> row_multiset(const DataTable& t) {
    std::multiset<std::tuple<std::size_t, double, double, int>> out;
    for (std::size_t r = 0; r < t.n_rows(); ++r)
        out.insert({t.row_id(r).origin, *t.cell(r, 0), *t.cell(r, 1), t.label(r)});
    return out;
}

bool includes_multiset(const std::multiset<std::tuple<std::size_t, double, double, int>>& big,
                       const std::multiset<std::tuple<std::size_t, double, double, int>>& small) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

} // namespace

TEST_CASE("oversampling grows small classes to half the majority, exactly") {
    rng::Engine eng(33);
    for (int trial = 0; trial < 100; ++trial) {
        int classes = 2 + static_cast<int>(eng.below(3));
        DataTable t = random_labeled(eng, 30 + eng.below(120), classes);
        auto before = t.class_counts();
        std::size_t majority = 0;
        for (const auto& [cls, n] : before) majority = std::max(majority, n);

        DataTable out = oversample(t, ResamplePlan{ResampleMode::oversample, 9000u + trial});
        auto after = out.class_counts();
        REQUIRE(after.size() == before.size());
        for (const auto& [cls, n] : before) {
            std::size_t target = std::max(n, majority / 2);
            REQUIRE(after[cls] == target);
        }

        // the original rows are all still there, in place, and additions are
        // copies of existing rows of the same class
        auto base = row_multiset(t);
        auto grown = row_multiset(out);
        CHECK(includes_multiset(grown, base));
        for (std::size_t r = 0; r < t.n_rows(); ++r)
            REQUIRE(out.row_id(r) == t.row_id(r));
        for (std::size_t r = t.n_rows(); r < out.n_rows(); ++r) {
            REQUIRE(out.row_id(r).replica > 0);
            std::size_t origin = out.row_id(r).origin;
            REQUIRE(origin < t.n_rows());
            REQUIRE(out.label(r) == t.label(origin));
            REQUIRE(out.cell(r, 0) == t.cell(origin, 0));
        }
    }
}

TEST_CASE("undersampling equalizes every class at the minority count") {
    rng::Engine eng(44);
    for (int trial = 0; trial < 100; ++trial) {
        int classes = 2 + static_cast<int>(eng.below(3));
        DataTable t = random_labeled(eng, 30 + eng.below(120), classes);
        auto before = t.class_counts();
        std::size_t minority = SIZE_MAX;
        for (const auto& [cls, n] : before) minority = std::min(minority, n);

        DataTable out = undersample(t, ResamplePlan{ResampleMode::undersample, 100u + trial});
        auto after = out.class_counts();
        REQUIRE(after.size() == before.size());
        for (const auto& [cls, n] : after) REQUIRE(n == minority);

        CHECK(includes_multiset(row_multiset(t), row_multiset(out)));

        // survivors keep their original relative order
        std::vector<std::size_t> origins;
        for (std::size_t r = 0; r < out.n_rows(); ++r) origins.push_back(out.row_id(r).origin);
        CHECK(std::is_sorted(origins.begin(), origins.end()));
    }
}

TEST_CASE("resampling dispatch is mode-driven and seed-deterministic") {
    rng::Engine eng(3);
    DataTable t = random_labeled(eng, 60, 2);
    for (std::size_t r = 0; r < 60; ++r) t.set_label(r, r < 40 ? 0 : 1); // forced imbalance
    DataTable same = resample(t, ResamplePlan{ResampleMode::none, 1});
    CHECK(same.n_rows() == t.n_rows());

    DataTable a = resample(t, ResamplePlan{ResampleMode::oversample, 5});
    DataTable b = resample(t, ResamplePlan{ResampleMode::oversample, 5});
    REQUIRE(a.n_rows() == b.n_rows());
    for (std::size_t r = 0; r < a.n_rows(); ++r) {
        CHECK(a.row_id(r) == b.row_id(r));
        CHECK(a.cell(r, 0) == b.cell(r, 0));
    }

    DataTable u1 = resample(t, ResamplePlan{ResampleMode::undersample, 5});
    DataTable u2 = resample(t, ResamplePlan{ResampleMode::undersample, 6});
    bool identical = u1.n_rows() == u2.n_rows();
    if (identical)
        for (std::size_t r = 0; r < u1.n_rows(); ++r)
            identical = identical && u1.row_id(r) == u2.row_id(r);
    CHECK(!identical); // different seeds keep different subsets
}

TEST_CASE("resample mode names round-trip") {
    for (ResampleMode mode :
         {ResampleMode::none, ResampleMode::oversample, ResampleMode::undersample})
        CHECK(resample_mode_from_string(to_string(mode)) == mode);
    CHECK_THROWS_AS(resample_mode_from_string("bogus"), ValidationError);
}

TEST_CASE("week binning matches an explicitly constructed lookup") {
    for (int bins = 3; bins <= 7; ++bins) {
        // Build the expected day -> class map from the written-out ranges:
        // class 0 is day 0; class i covers days 7(i-1)+1 ..= 7i; the last
        // class is open ended.
        std::map<int, int> expected;
        expected[0] = 0;
        for (int cls = 1; cls <= bins - 2; ++cls)
            for (int day = 7 * (cls - 1) + 1; day <= 7 * cls; ++day) expected[day] = cls;
        for (int day = 7 * (bins - 2) + 1; day <= 60; ++day) expected[day] = bins - 1;

        for (int day = 0; day <= 60; ++day)
            REQUIRE(bin_ventilation_days(day, BinSpec{bins}) == expected.at(day));
    }

    CHECK(bin_ventilation_days(0, BinSpec{3}) == 0);
    CHECK(bin_ventilation_days(10, BinSpec{3}) == 2);
    CHECK(bin_ventilation_days(36, BinSpec{7}) == 6);
}

TEST_CASE("bin label texts spell out the open-ended top class") {
    CHECK(bin_label_texts(BinSpec{3}) == std::vector<std::string>{"0", "1", ">1"});
    CHECK(bin_label_texts(BinSpec{5}) == std::vector<std::string>{"0", "1", "2", "3", ">3"});
    CHECK(bin_label_texts(BinSpec{7}) ==
          std::vector<std::string>{"0", "1", "2", "3", "4", "5", ">5"});
}

TEST_CASE("binning validates its inputs") {
    CHECK_THROWS_AS(bin_ventilation_days(5, BinSpec{2}), ValidationError);
    CHECK_THROWS_AS(bin_ventilation_days(5, BinSpec{8}), ValidationError);
    CHECK_THROWS_AS(bin_ventilation_days(-1, BinSpec{4}), ValidationError);
}

TEST_CASE("binning rewrites day labels in place") {
    DataTable t = testutil::make_table(testutil::continuous_schema(1),
                                       {{Cell(0.0)}, {Cell(0.0)}, {Cell(0.0)}, {Cell(0.0)}},
                                       {0, 3, 9, 40});
    bin_label_days(t, BinSpec{4});
    CHECK(t.labels() == std::vector<int>{0, 1, 2, 3});
}
