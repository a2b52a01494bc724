#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "json.hpp"
#include "tabpred/data_table.hpp"

namespace tabpred {

// Generator for class-imbalanced clinical-style tables. Binary mode labels
// rows 0/1 with an exact positive count; day-count mode labels rows with
// ventilation-day totals (0 = never ventilated) whose weekly severity drives
// the informative features, so week-binned targets stay learnable.
struct SynthConfig {
    std::size_t n_rows = 200;
    std::size_t informative = 3; // continuous, class-shifted means
    std::size_t noise = 2;       // continuous, label-independent
    std::size_t booleans = 1;    // 0/1 with class-dependent rates
    std::size_t categoricals = 0; // integer codes 0..3, class-skewed
    double positive_fraction = 0.5; // exact count round(n_rows * fraction)
    double class_separation = 1.5;  // informative mean shift, in stddevs
    double missing_fraction = 0.0;  // chance each feature cell goes absent
    std::uint64_t seed = 0;
    std::string label_name = "outcome";

    bool day_label = false; // ventilation-day counts instead of 0/1
    int max_days = 60;
    double zero_day_fraction = 0.5; // exact share of never-ventilated rows
};

SynthConfig synth_config_from_json(const nlohmann::json& doc);

// Builds the table and its schema per the config; deterministic in the seed.
DataTable synth_table(const SynthConfig& config);

} // namespace tabpred
