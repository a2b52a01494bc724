// Synthetic table generator: exact class counts, column families, rate
// targets, and stream independence between columns.
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>

#include "json.hpp"

#include "tabpred/error.hpp"
#include "tabpred/synth.hpp"

using namespace tabpred;

namespace {

std::string csv_of(const DataTable& table) {
    std::ostringstream out;
    table.write_csv(out);
    return out.str();
}

} // namespace

TEST_CASE("binary mode hits the requested positive count exactly") {
    SynthConfig cfg;
    cfg.n_rows = 1384;
    cfg.positive_fraction = 260.0 / 1384.0;
    cfg.seed = 7;
    DataTable table = synth_table(cfg);
    auto counts = table.class_counts();
    REQUIRE(counts.size() == 2);
    CHECK(counts.at(0) == 1124);
    CHECK(counts.at(1) == 260);
    CHECK(table.n_rows() == 1384);

    cfg.positive_fraction = 0.0;
    auto all_zero = synth_table(cfg).class_counts();
    REQUIRE(all_zero.size() == 1);
    CHECK(all_zero.at(0) == 1384);

    cfg.positive_fraction = 1.0;
    auto all_one = synth_table(cfg).class_counts();
    REQUIRE(all_one.size() == 1);
    CHECK(all_one.at(1) == 1384);
}

TEST_CASE("day mode produces the exact zero share and bounded day counts") {
    SynthConfig cfg;
    cfg.n_rows = 200;
    cfg.day_label = true;
    cfg.zero_day_fraction = 0.4;
    cfg.max_days = 14;
    cfg.seed = 11;
    DataTable table = synth_table(cfg);
    std::size_t zeros = 0;
    bool saw_positive = false;
    for (std::size_t r = 0; r < table.n_rows(); ++r) {
        int days = table.label(r);
        REQUIRE(days >= 0);
        REQUIRE(days <= 14);
        if (days == 0)
            ++zeros;
        else
            saw_positive = true;
    }
    CHECK(zeros == 80); // llround(200 * 0.4)
    CHECK(saw_positive);
}

TEST_CASE("missing fraction controls how many cells go absent") {
    SynthConfig cfg;
    cfg.n_rows = 500;
    cfg.informative = 3;
    cfg.noise = 2;
    cfg.booleans = 1;
    cfg.seed = 3;

    cfg.missing_fraction = 0.0;
    CHECK(synth_table(cfg).missing_count() == 0);

    cfg.missing_fraction = 0.2;
    DataTable holey = synth_table(cfg);
    double rate = static_cast<double>(holey.missing_count()) /
                  static_cast<double>(holey.n_rows() * holey.schema().size());
    CHECK(rate > 0.15);
    CHECK(rate < 0.25);
}

TEST_CASE("generation is deterministic in the seed") {
    SynthConfig cfg;
    cfg.n_rows = 120;
    cfg.categoricals = 1;
    cfg.missing_fraction = 0.1;
    cfg.seed = 42;
    CHECK(csv_of(synth_table(cfg)) == csv_of(synth_table(cfg)));

    SynthConfig other = cfg;
    other.seed = 43;
    CHECK(csv_of(synth_table(cfg)) != csv_of(synth_table(other)));
}

TEST_CASE("column content does not depend on sibling columns") {
    SynthConfig narrow;
    narrow.n_rows = 60;
    narrow.informative = 2;
    narrow.noise = 1;
    narrow.seed = 19;
    SynthConfig wide = narrow;
    wide.noise = 3;
    wide.booleans = 2;

    DataTable a = synth_table(narrow);
    DataTable b = synth_table(wide);
    std::size_t col_a = a.schema().index_of("marker_1").value();
    std::size_t col_b = b.schema().index_of("marker_1").value();
    for (std::size_t r = 0; r < a.n_rows(); ++r) {
        CHECK(a.label(r) == b.label(r));
        REQUIRE(a.cell(r, col_a).has_value());
        REQUIRE(b.cell(r, col_b).has_value());
        CHECK(*a.cell(r, col_a) == *b.cell(r, col_b));
    }
}

TEST_CASE("schema names and kinds follow the column families") {
    SynthConfig cfg;
    cfg.n_rows = 80;
    cfg.informative = 2;
    cfg.noise = 1;
    cfg.booleans = 2;
    cfg.categoricals = 1;
    cfg.label_name = "status";
    cfg.seed = 5;
    DataTable table = synth_table(cfg);
    const FeatureSchema& schema = table.schema();
    REQUIRE(schema.size() == 6);
    CHECK(table.label_name() == "status");
    CHECK(schema.column(schema.index_of("marker_1").value()).kind == ColumnKind::continuous);
    CHECK(schema.column(schema.index_of("marker_2").value()).kind == ColumnKind::continuous);
    CHECK(schema.column(schema.index_of("noise_1").value()).kind == ColumnKind::continuous);
    CHECK(schema.column(schema.index_of("flag_1").value()).kind == ColumnKind::boolean);
    CHECK(schema.column(schema.index_of("flag_2").value()).kind == ColumnKind::boolean);
    CHECK(schema.column(schema.index_of("code_1").value()).kind == ColumnKind::categorical);

    // Flags stay 0/1 and codes stay 0..3.
    std::size_t flag = schema.index_of("flag_1").value();
    std::size_t code = schema.index_of("code_1").value();
    for (std::size_t r = 0; r < table.n_rows(); ++r) {
        double f = *table.cell(r, flag);
        CHECK((f == 0.0 || f == 1.0));
        double c = *table.cell(r, code);
        CHECK(c == std::floor(c));
        CHECK(c >= 0.0);
        CHECK(c <= 3.0);
    }
}

TEST_CASE("informative columns actually separate the classes") {
    SynthConfig cfg;
    cfg.n_rows = 400;
    cfg.informative = 1;
    cfg.noise = 1;
    cfg.booleans = 0;
    cfg.class_separation = 2.0;
    cfg.positive_fraction = 0.5;
    cfg.seed = 23;
    DataTable table = synth_table(cfg);
    std::size_t marker = table.schema().index_of("marker_1").value();
    std::size_t noise = table.schema().index_of("noise_1").value();
    double mean_m[2] = {0, 0};
    double mean_n[2] = {0, 0};
    std::size_t count[2] = {0, 0};
    for (std::size_t r = 0; r < table.n_rows(); ++r) {
        auto y = static_cast<std::size_t>(table.label(r));
        mean_m[y] += *table.cell(r, marker);
        mean_n[y] += *table.cell(r, noise);
        ++count[y];
    }
    for (int y : {0, 1}) {
        mean_m[y] /= static_cast<double>(count[y]);
        mean_n[y] /= static_cast<double>(count[y]);
    }
    CHECK(mean_m[1] - mean_m[0] > 1.5);           // shifted by ~class_separation
    CHECK(std::abs(mean_n[1] - mean_n[0]) < 0.5); // noise is label-blind
}

TEST_CASE("generator rejects out-of-range settings") {
    SynthConfig cfg;
    cfg.n_rows = 0;
    CHECK_THROWS_AS(synth_table(cfg), ValidationError);

    cfg = SynthConfig{};
    cfg.informative = cfg.noise = cfg.booleans = cfg.categoricals = 0;
    CHECK_THROWS_AS(synth_table(cfg), ValidationError);

    cfg = SynthConfig{};
    cfg.positive_fraction = 1.5;
    CHECK_THROWS_AS(synth_table(cfg), ValidationError);
    cfg.positive_fraction = -0.1;
    CHECK_THROWS_AS(synth_table(cfg), ValidationError);

    cfg = SynthConfig{};
    cfg.missing_fraction = 1.0;
    CHECK_THROWS_AS(synth_table(cfg), ValidationError);

    cfg = SynthConfig{};
    cfg.label_name = "";
    CHECK_THROWS_AS(synth_table(cfg), ValidationError);

    cfg = SynthConfig{};
    cfg.day_label = true;
    cfg.max_days = 0;
    CHECK_THROWS_AS(synth_table(cfg), ValidationError);

    cfg = SynthConfig{};
    cfg.day_label = true;
    cfg.zero_day_fraction = 1.5;
    CHECK_THROWS_AS(synth_table(cfg), ValidationError);
}

TEST_CASE("synth config parsing covers every key and rejects unknown ones") {
    auto doc = nlohmann::json::parse(R"({
        "n_rows": 64, "informative": 4, "noise": 3, "booleans": 2, "categoricals": 1,
        "positive_fraction": 0.25, "class_separation": 0.75, "missing_fraction": 0.05,
        "seed": 99, "label_name": "y", "day_label": true, "max_days": 21,
        "zero_day_fraction": 0.6
    })");
    SynthConfig cfg = synth_config_from_json(doc);
    CHECK(cfg.n_rows == 64);
    CHECK(cfg.informative == 4);
    CHECK(cfg.noise == 3);
    CHECK(cfg.booleans == 2);
    CHECK(cfg.categoricals == 1);
    CHECK(cfg.positive_fraction == 0.25);
    CHECK(cfg.class_separation == 0.75);
    CHECK(cfg.missing_fraction == 0.05);
    CHECK(cfg.seed == 99);
    CHECK(cfg.label_name == "y");
    CHECK(cfg.day_label);
    CHECK(cfg.max_days == 21);
    CHECK(cfg.zero_day_fraction == 0.6);

    CHECK_THROWS_AS(synth_config_from_json(nlohmann::json::parse(R"({"rows": 10})")),
                    ValidationError);
    CHECK_THROWS_AS(synth_config_from_json(nlohmann::json::parse(R"(["not", "object"])")),
                    ValidationError);
}
