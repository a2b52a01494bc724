#include "tabpred/synth.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "tabpred/error.hpp"
#include "tabpred/rng.hpp"

namespace tabpred {

namespace {

void check(bool ok, const char* message) {
    if (!ok) throw ValidationError(std::string("synth: ") + message);
}

} // namespace

SynthConfig synth_config_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ValidationError("synth: config must be a JSON object");
    SynthConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        if (key == "n_rows") cfg.n_rows = value.get<std::size_t>();
        else if (key == "informative") cfg.informative = value.get<std::size_t>();
        else if (key == "noise") cfg.noise = value.get<std::size_t>();
        else if (key == "booleans") cfg.booleans = value.get<std::size_t>();
        else if (key == "categoricals") cfg.categoricals = value.get<std::size_t>();
        else if (key == "positive_fraction") cfg.positive_fraction = value.get<double>();
        else if (key == "class_separation") cfg.class_separation = value.get<double>();
        else if (key == "missing_fraction") cfg.missing_fraction = value.get<double>();
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else if (key == "label_name") cfg.label_name = value.get<std::string>();
        else if (key == "day_label") cfg.day_label = value.get<bool>();
        else if (key == "max_days") cfg.max_days = value.get<int>();
        else if (key == "zero_day_fraction") cfg.zero_day_fraction = value.get<double>();
        else throw ValidationError("synth: unknown config key '" + key + "'");
    }
    return cfg;
}

DataTable synth_table(const SynthConfig& config) {
    check(config.n_rows >= 1, "n_rows must be positive");
    const std::size_t d =
        config.informative + config.noise + config.booleans + config.categoricals;
    check(d >= 1, "at least one feature column required");
    check(config.positive_fraction >= 0.0 && config.positive_fraction <= 1.0,
          "positive_fraction must lie in [0, 1]");
    check(config.missing_fraction >= 0.0 && config.missing_fraction < 1.0,
          "missing_fraction must lie in [0, 1)");
    check(!config.label_name.empty(), "label_name must not be empty");
    if (config.day_label) {
        check(config.max_days >= 1, "max_days must be positive");
        check(config.zero_day_fraction >= 0.0 && config.zero_day_fraction <= 1.0,
              "zero_day_fraction must lie in [0, 1]");
    }

    const std::size_t n = config.n_rows;

    // Labels first; exact class counts, order shuffled.
    std::vector<int> labels(n, 0);
    if (config.day_label) {
        auto zeros = static_cast<std::size_t>(
            std::llround(static_cast<double>(n) * config.zero_day_fraction));
        zeros = std::min(zeros, n);
        rng::Engine days_eng(rng::mix(config.seed, rng::hash_string("days")));
        for (std::size_t i = zeros; i < n; ++i)
            labels[i] = 1 + static_cast<int>(days_eng.below(
                                static_cast<std::uint64_t>(config.max_days)));
    } else {
        auto positives = static_cast<std::size_t>(
            std::llround(static_cast<double>(n) * config.positive_fraction));
        positives = std::min(positives, n);
        for (std::size_t i = 0; i < positives; ++i) labels[i] = 1;
    }
    rng::Engine order_eng(rng::mix(config.seed, rng::hash_string("label-order")));
    order_eng.shuffle(labels);

    // Per-row signal strength in [0, 1] that the informative columns follow.
    const int max_weeks = (config.max_days + 6) / 7;
    std::vector<double> severity(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (config.day_label) {
            int weeks = labels[i] == 0 ? 0 : (labels[i] + 6) / 7;
            severity[i] = static_cast<double>(weeks) / static_cast<double>(max_weeks);
        } else {
            severity[i] = static_cast<double>(labels[i]);
        }
    }

    std::vector<FeatureSchema::Column> columns;
    columns.reserve(d);
    for (std::size_t j = 0; j < config.informative; ++j)
        columns.push_back({"marker_" + std::to_string(j + 1), ColumnKind::continuous});
    for (std::size_t j = 0; j < config.noise; ++j)
        columns.push_back({"noise_" + std::to_string(j + 1), ColumnKind::continuous});
    for (std::size_t j = 0; j < config.booleans; ++j)
        columns.push_back({"flag_" + std::to_string(j + 1), ColumnKind::boolean});
    for (std::size_t j = 0; j < config.categoricals; ++j)
        columns.push_back({"code_" + std::to_string(j + 1), ColumnKind::categorical});

    // One value stream and one missingness stream per column, so column
    // content never depends on how many other columns exist.
    std::vector<std::optional<double>> cells(n * d);
    for (std::size_t c = 0; c < d; ++c) {
        rng::Engine value_eng(rng::mix(config.seed, rng::hash_string("column"),
                                       rng::hash_string(columns[c].name)));
        const bool is_marker = c < config.informative;
        const bool is_noise = !is_marker && c < config.informative + config.noise;
        const bool is_flag =
            !is_marker && !is_noise && c < config.informative + config.noise + config.booleans;
        for (std::size_t r = 0; r < n; ++r) {
            double v;
            if (is_marker) {
                v = severity[r] * config.class_separation + value_eng.gaussian();
            } else if (is_noise) {
                v = value_eng.gaussian();
            } else if (is_flag) {
                double p = 0.25 + 0.5 * severity[r];
                v = value_eng.uniform() < p ? 1.0 : 0.0;
            } else {
                // Codes 0..3, skewed toward high codes as severity grows.
                double shaped = std::pow(value_eng.uniform(), 1.0 / (1.0 + severity[r]));
                v = std::min(3.0, std::floor(shaped * 4.0));
            }
            cells[r * d + c] = v;
        }
        if (config.missing_fraction > 0.0) {
            rng::Engine miss_eng(rng::mix(config.seed, rng::hash_string("missing"),
                                          rng::hash_string(columns[c].name)));
            for (std::size_t r = 0; r < n; ++r)
                if (miss_eng.uniform() < config.missing_fraction) cells[r * d + c].reset();
        }
    }

    DataTable table(FeatureSchema(std::move(columns)));
    table.set_label_name(config.label_name);
    table.reserve(n);
    std::vector<std::optional<double>> row(d);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) row[c] = cells[r * d + c];
        table.append_row(row, labels[r]);
    }
    return table;
}

} // namespace tabpred
