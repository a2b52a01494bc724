#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tabpred/cross_validation.hpp"
#include "tabpred/importance.hpp"
#include "tabpred/model.hpp"
#include "tabpred/rebalance.hpp"

namespace tabpred {

enum class Outcome { last_status, icu_needed, ventilated_days };

std::string to_string(Outcome outcome);
Outcome outcome_from_string(const std::string& text);

// Resolved experiment settings. Defaults follow the study design: binary
// outcomes run every family on the original variant, the ventilation-days
// outcome runs {dnn} on the oversampled variant; positive label defaults to
// 1 for last_status (survived) and 0 for icu_needed (no ICU required).
struct ExperimentConfig {
    std::filesystem::path dataset;
    std::filesystem::path schema;
    Outcome outcome = Outcome::last_status;
    std::string label_column;  // defaults to the outcome name
    int positive_label = 1;    // binary outcomes only
    ResampleMode variant = ResampleMode::none;
    int bin_count = 0; // ventilated_days only; 3..7
    ImportanceMethod selector = ImportanceMethod::extra_trees;
    std::vector<std::size_t> top_k; // evaluation sizes, as configured
    bool top_k_explicit = false;    // defaults are clipped to the width, explicit values are not
    std::vector<ModelFamily> families;
    std::size_t fold_count = 5;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir;
    ImputeScope impute_scope = ImputeScope::train_only;
    std::size_t imputer_k = 5;
    std::size_t ranking_trees = 100;
    // Per-family overrides applied on top of the built-in defaults.
    std::map<ModelFamily, std::map<std::string, double>> overrides;
    nlohmann::ordered_json search; // search-space block for the search command
    nlohmann::ordered_json synth;  // generator block for the synth command
    nlohmann::ordered_json raw;    // config as given, echoed into reports
};

// Parses and validates; unknown keys are rejected. `raw` keeps the document.
ExperimentConfig experiment_config_from_json(const nlohmann::ordered_json& doc);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// The resolved settings as JSON (defaults filled in), for the report echo.
nlohmann::ordered_json effective_config_json(const ExperimentConfig& config);

struct ExperimentResult {
    std::vector<ImportanceVector> importances; // both selector methods
    std::vector<std::string> ranking;          // configured selector's order
    std::vector<EvalReport> reports;           // one per (top_k, family)
    std::vector<std::filesystem::path> written;
};

// Full pipeline: ingest -> boolean fill -> KNN impute -> rank (both
// selectors) -> cross-validate each (top_k, family) pair -> write report.json,
// ROC SVGs (binary), pooled confusion CSVs (binned outcome) and importance
// JSONs into output_dir. Any failure removes the files written so far and
// rethrows with the stage named. Output bytes depend only on (config, seed).
ExperimentResult run_experiment(const ExperimentConfig& config);

} // namespace tabpred
