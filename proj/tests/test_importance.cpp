#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "tabpred/error.hpp"
#include "tabpred/importance.hpp"
#include "tabpred/rng.hpp"

using namespace tabpred;
using testutil::Cell;

namespace {

// Labels are a threshold function of column 0; remaining columns are noise.
DataTable separable_table(std::size_t rows, std::size_t noise_cols, std::uint64_t seed) {
    rng::Engine eng(seed);
    std::vector<testutil::Row> cells(rows, testutil::Row(1 + noise_cols));
    std::vector<int> labels(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        labels[r] = static_cast<int>(eng.below(2));
        cells[r][0] = labels[r] == 1 ? eng.uniform(1.0, 2.0) : eng.uniform(-2.0, -1.0);
        for (std::size_t c = 1; c <= noise_cols; ++c) cells[r][c] = eng.uniform(-2, 2);
    }
    labels[0] = 0;
    cells[0][0] = -1.5;
    labels[1] = 1;
    cells[1][0] = 1.5;
    return testutil::make_table(testutil::continuous_schema(1 + noise_cols), cells, labels);
}

double total(const ImportanceVector& iv) {
    double s = 0.0;
    for (const auto& [name, v] : iv.entries) s += v;
    return s;
}

} // namespace

TEST_CASE("a perfectly separating feature dominates the ranking for both forests") {
    DataTable t = separable_table(160, 3, 7);
    for (ImportanceMethod method :
         {ImportanceMethod::extra_trees, ImportanceMethod::random_forest}) {
        ImportanceVector iv = impurity_importance(t, method, 100, 42);
        REQUIRE(iv.entries.size() == 4);
        CHECK(iv.entries[0].first == "c0");
        CHECK(iv.entries[0].second > 0.5);
        CHECK(total(iv) == doctest::Approx(1.0).epsilon(1e-9));
        for (std::size_t i = 1; i < iv.entries.size(); ++i)
            CHECK(iv.entries[i - 1].second >= iv.entries[i].second);
    }
}

TEST_CASE("identical informative columns share importance roughly evenly") {
    rng::Engine eng(5);
    std::vector<testutil::Row> cells(200, testutil::Row(4));
    std::vector<int> labels(200);
    for (std::size_t r = 0; r < 200; ++r) {
        labels[r] = static_cast<int>(eng.below(2));
        double v = labels[r] == 1 ? eng.uniform(0.5, 1.5) : eng.uniform(-1.5, -0.5);
        for (std::size_t c = 0; c < 4; ++c) cells[r][c] = v;
    }
    labels[0] = 0;
    cells[0] = {Cell(-1.0), Cell(-1.0), Cell(-1.0), Cell(-1.0)};
    labels[1] = 1;
    cells[1] = {Cell(1.0), Cell(1.0), Cell(1.0), Cell(1.0)};
    DataTable t = testutil::make_table(testutil::continuous_schema(4), cells, labels);

    ImportanceVector iv = impurity_importance(t, ImportanceMethod::extra_trees, 300, 11);
    CHECK(total(iv) == doctest::Approx(1.0).epsilon(1e-9));
    for (const auto& [name, v] : iv.entries) {
        CHECK(v > 0.1);
        CHECK(v < 0.4);
    }
}

TEST_CASE("single-class tables produce an all-zero ranking") {
    rng::Engine eng(9);
    DataTable t = testutil::random_table(eng, 30, 3, 0.0, 1);
    for (std::size_t r = 0; r < t.n_rows(); ++r) t.set_label(r, 4);
    ImportanceVector iv = impurity_importance(t, ImportanceMethod::random_forest, 50, 3);
    for (const auto& [name, v] : iv.entries) CHECK(v == 0.0);
}

TEST_CASE("rankings are seed-deterministic") {
    DataTable t = separable_table(80, 2, 13);
    ImportanceVector a = impurity_importance(t, ImportanceMethod::extra_trees, 60, 5);
    ImportanceVector b = impurity_importance(t, ImportanceMethod::extra_trees, 60, 5);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].first == b.entries[i].first);
        CHECK(a.entries[i].second == b.entries[i].second);
    }
    CHECK(a.method == ImportanceMethod::extra_trees);
    CHECK(a.seed == 5);
    CHECK(a.tree_count == 60);
}

TEST_CASE("ties in importance order by feature name") {
    // Two constant columns never split: both get zero importance and must
    // appear in name order after the informative one.
    rng::Engine eng(21);
    std::vector<testutil::Row> cells(60, testutil::Row(3));
    std::vector<int> labels(60);
    for (std::size_t r = 0; r < 60; ++r) {
        labels[r] = static_cast<int>(eng.below(2));
        cells[r][0] = labels[r] == 1 ? 1.0 : -1.0;
        cells[r][1] = 5.0;
        cells[r][2] = 5.0;
    }
    labels[0] = 0;
    cells[0][0] = -1.0;
    labels[1] = 1;
    cells[1][0] = 1.0;
    DataTable t = testutil::make_table(testutil::continuous_schema(3), cells, labels);
    ImportanceVector iv = impurity_importance(t, ImportanceMethod::extra_trees, 40, 2);
    REQUIRE(iv.entries.size() == 3);
    CHECK(iv.entries[0].first == "c0");
    CHECK(iv.entries[1].first == "c1");
    CHECK(iv.entries[1].second == 0.0);
    CHECK(iv.entries[2].first == "c2");
    CHECK(iv.entries[2].second == 0.0);
}

TEST_CASE("top-k selection returns ranking prefixes") {
    DataTable t = separable_table(80, 4, 3);
    ImportanceVector iv = impurity_importance(t, ImportanceMethod::extra_trees, 50, 8);
    auto five = select_top_k(iv, 5);
    auto three = select_top_k(iv, 3);
    REQUIRE(five.size() == 5);
    REQUIRE(three.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(three[i] == five[i]);
    CHECK(three[0] == "c0");
    CHECK_THROWS_AS(select_top_k(iv, 6), ValidationError);
    CHECK_THROWS_AS(select_top_k(iv, 0), ValidationError);
}

TEST_CASE("feature ranking validates its inputs") {
    rng::Engine eng(1);
    DataTable t = testutil::random_table(eng, 10, 2, 0.0);
    CHECK_THROWS_AS(impurity_importance(t, ImportanceMethod::extra_trees, 0, 1),
                    ValidationError);
    DataTable holey = testutil::make_table(testutil::continuous_schema(1),
                                           {{Cell(1.0)}, {std::nullopt}}, {0, 1});
    CHECK_THROWS_AS(impurity_importance(holey, ImportanceMethod::extra_trees, 10, 1), Error);
    CHECK(importance_method_from_string("extra_trees") == ImportanceMethod::extra_trees);
    CHECK(importance_method_from_string("random_forest") == ImportanceMethod::random_forest);
    CHECK_THROWS_AS(importance_method_from_string("x"), ValidationError);
}
