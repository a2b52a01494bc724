#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tabpred/cross_validation.hpp"
#include "tabpred/data_table.hpp"
#include "tabpred/error.hpp"
#include "tabpred/experiment.hpp"
#include "tabpred/format.hpp"
#include "tabpred/importance.hpp"
#include "tabpred/impute.hpp"
#include "tabpred/parallel.hpp"
#include "tabpred/rebalance.hpp"
#include "tabpred/report.hpp"
#include "tabpred/rng.hpp"
#include "tabpred/synth.hpp"
#include "tabpred/tuning.hpp"

namespace {

using namespace tabpred;

// Shared front half of the stage commands: schema + CSV, then week-binning
// for the day-count outcome.
DataTable load_table(const ExperimentConfig& cfg, bool bin_days) {
    FeatureSchema schema = FeatureSchema::load(cfg.schema);
    DataTable table = DataTable::parse_csv(cfg.dataset, schema, cfg.label_column);
    if (bin_days && cfg.outcome == Outcome::ventilated_days)
        bin_label_days(table, BinSpec{cfg.bin_count});
    return table;
}

std::filesystem::path require_out_dir(const ExperimentConfig& cfg) {
    if (cfg.output_dir.empty())
        throw ValidationError("an output directory is required (config output_dir or --out)");
    std::filesystem::create_directories(cfg.output_dir);
    return cfg.output_dir;
}

nlohmann::ordered_json config_echo(const ExperimentConfig& cfg) {
    return {{"given", cfg.raw}, {"effective", effective_config_json(cfg)}};
}

void print_aggregates(const EvalReport& r) {
    std::cout << "  " << to_string(r.spec.family) << ", " << r.features.size()
              << " features: accuracy "
              << format_percent_spread(r.accuracy.mean, r.accuracy.stddev);
    if (r.binary) {
        std::cout << ", sensitivity "
                  << format_percent_spread(r.sensitivity.mean, r.sensitivity.stddev)
                  << ", specificity "
                  << format_percent_spread(r.specificity.mean, r.specificity.stddev) << ", AUC "
                  << format_fixed(r.auc.mean, 3) << " (+/- " << format_fixed(r.auc.stddev, 3)
                  << ")";
    }
    std::cout << '\n';
}

int do_run(const ExperimentConfig& cfg) {
    ExperimentResult result = run_experiment(cfg);
    for (const EvalReport& r : result.reports) print_aggregates(r);
    for (const auto& path : result.written) std::cout << "wrote " << path.string() << '\n';
    return 0;
}

int do_impute(const ExperimentConfig& cfg) {
    auto dir = require_out_dir(cfg);
    DataTable table = load_table(cfg, false);
    std::size_t missing_before = table.missing_count();
    std::size_t booleans = fill_boolean(table);
    ImputeStats stats = knn_impute(table, ImputerConfig{cfg.imputer_k});
    table.write_csv(dir / "imputed.csv");
    nlohmann::ordered_json doc{{"missing_before", missing_before},
                               {"boolean_filled", booleans},
                               {"knn_filled", stats.knn_filled},
                               {"mean_fallbacks", stats.mean_fallbacks},
                               {"zero_fallbacks", stats.zero_fallbacks},
                               {"remaining_missing", table.missing_count()}};
    write_json_file(doc, dir / "impute_stats.json");
    std::cout << "filled " << booleans << " boolean cells and " << stats.total()
              << " other cells; wrote " << (dir / "imputed.csv").string() << '\n';
    return 0;
}

int do_resample(const ExperimentConfig& cfg) {
    auto dir = require_out_dir(cfg);
    DataTable table = load_table(cfg, true);
    auto before = table.class_counts();
    ResamplePlan plan{cfg.variant, rng::mix(cfg.seed, rng::hash_string("resample"))};
    DataTable out = resample(table, plan);
    auto after = out.class_counts();
    out.write_csv(dir / "resampled.csv");
    for (const auto& [label, count] : after)
        std::cout << "  class " << label << ": " << before[label] << " -> " << count << '\n';
    std::cout << "wrote " << (dir / "resampled.csv").string() << '\n';
    return 0;
}

int do_rank(const ExperimentConfig& cfg) {
    auto dir = require_out_dir(cfg);
    DataTable table = load_table(cfg, true);
    fill_boolean(table);
    knn_impute(table, ImputerConfig{cfg.imputer_k});
    ImportanceVector selected;
    for (ImportanceMethod method :
         {ImportanceMethod::extra_trees, ImportanceMethod::random_forest}) {
        ImportanceVector iv = impurity_importance(
            table, method, cfg.ranking_trees,
            rng::mix(cfg.seed, rng::hash_string("ranking"), rng::hash_string(to_string(method))));
        write_json_file(importance_to_json(iv),
                        dir / ("importance_" + to_string(method) + ".json"));
        if (method == cfg.selector) selected = iv;
    }
    std::size_t shown = std::min<std::size_t>(10, selected.entries.size());
    std::cout << "top " << shown << " by " << to_string(cfg.selector) << ":\n";
    for (std::size_t i = 0; i < shown; ++i)
        std::cout << "  " << (i + 1) << ". " << selected.entries[i].first << " ("
                  << format_fixed(selected.entries[i].second, 4) << ")\n";
    return 0;
}

CvOptions cv_options_for(const ExperimentConfig& cfg) {
    CvOptions options;
    options.fold_count = cfg.fold_count;
    options.seed = rng::mix(cfg.seed, rng::hash_string("cv"));
    options.impute_scope = cfg.impute_scope;
    options.imputer.k = cfg.imputer_k;
    options.positive_label = cfg.positive_label;
    return options;
}

int do_cv(const ExperimentConfig& cfg) {
    auto dir = require_out_dir(cfg);
    DataTable table = load_table(cfg, true);
    std::vector<std::string> features = table.schema().names();
    ResamplePlan plan{cfg.variant, rng::mix(cfg.seed, rng::hash_string("resample"))};
    CvOptions options = cv_options_for(cfg);
    std::vector<EvalReport> reports;
    for (ModelFamily family : cfg.families) {
        ModelSpec spec(family,
                       rng::mix(cfg.seed, rng::hash_string(to_string(family)), features.size()));
        if (auto it = cfg.overrides.find(family); it != cfg.overrides.end())
            for (const auto& [name, v] : it->second) spec.hp.set(name, v);
        reports.push_back(cross_validate(table, spec, plan, features, options));
        print_aggregates(reports.back());
    }
    write_json_file(build_report_document(config_echo(cfg), {}, reports),
                    dir / "cv_report.json");
    std::cout << "wrote " << (dir / "cv_report.json").string() << '\n';
    return 0;
}

int do_search(const ExperimentConfig& cfg) {
    auto dir = require_out_dir(cfg);
    if (!cfg.search.is_object())
        throw ValidationError("config: a 'search' block is required for the search command");
    bool saw_family = false;
    ModelFamily family = ModelFamily::rf;
    SearchSpace space;
    std::vector<std::string> features;
    for (const auto& [key, value] : cfg.search.items()) {
        if (key == "family") {
            family = model_family_from_string(value.get<std::string>());
            saw_family = true;
        } else if (key == "space") {
            space = search_space_from_json(value);
        } else if (key == "features") {
            features = value.get<std::vector<std::string>>();
        } else {
            throw ValidationError("config: unknown search key '" + key + "'");
        }
    }
    if (!saw_family) throw ValidationError("config: search.family is required");
    if (space.params.empty()) throw ValidationError("config: search.space is required");

    DataTable table = load_table(cfg, true);
    ResamplePlan plan{cfg.variant, rng::mix(cfg.seed, rng::hash_string("resample"))};
    SearchResult result = random_search(table, family, space, features, plan, cv_options_for(cfg));
    write_json_file(search_result_to_json(result), dir / "search_result.json");

    std::cout << "best trial #" << result.best_index << " with mean accuracy "
              << format_fixed(result.best_score, 4) << ":\n";
    for (const auto& [name, value] : result.best.hp.values())
        std::cout << "  " << name << " = " << format_double(value) << '\n';
    std::cout << "wrote " << (dir / "search_result.json").string() << '\n';
    return 0;
}

int do_synth(const ExperimentConfig& cfg, const std::string& out_override,
             std::optional<std::uint64_t> seed_override) {
    if (!cfg.synth.is_object())
        throw ValidationError("config: a 'synth' block is required for the synth command");
    SynthConfig sc = synth_config_from_json(cfg.synth);
    if (seed_override) sc.seed = *seed_override;

    std::filesystem::path dataset = cfg.dataset;
    std::filesystem::path schema_path = cfg.schema;
    if (!out_override.empty()) {
        std::filesystem::create_directories(out_override);
        dataset = std::filesystem::path(out_override) / dataset.filename();
        schema_path = std::filesystem::path(out_override) / schema_path.filename();
    } else {
        if (dataset.has_parent_path()) std::filesystem::create_directories(dataset.parent_path());
        if (schema_path.has_parent_path())
            std::filesystem::create_directories(schema_path.parent_path());
    }

    DataTable table = synth_table(sc);
    table.write_csv(dataset);
    table.schema().save(schema_path);
    std::cout << "wrote " << table.n_rows() << " rows to " << dataset.string() << " (schema "
              << schema_path.string() << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tabpred: tabular clinical outcome-prediction pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed_value = 0;
    unsigned threads = 0;

    CLI::App* cmd_run = app.add_subcommand("run", "execute the full pipeline");
    CLI::App* cmd_impute =
        app.add_subcommand("impute", "fill missing cells and write the dense table");
    CLI::App* cmd_resample =
        app.add_subcommand("resample", "rebalance classes and write the result");
    CLI::App* cmd_rank = app.add_subcommand("rank", "rank features by impurity importance");
    CLI::App* cmd_cv =
        app.add_subcommand("cv", "cross-validate the configured models on all features");
    CLI::App* cmd_search = app.add_subcommand("search", "randomized hyperparameter search");
    CLI::App* cmd_synth = app.add_subcommand("synth", "generate a synthetic dataset");
    for (CLI::App* cmd :
         {cmd_run, cmd_impute, cmd_resample, cmd_rank, cmd_cv, cmd_search, cmd_synth}) {
        cmd->add_option("--config", config_path, "experiment config JSON file")->required();
        cmd->add_option("--seed", seed_value, "override the config seed");
        cmd->add_option("--out", out_dir, "override the output location");
        cmd->add_option("--threads", threads, "worker threads (default 1)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (threads > 0) tabpred::set_default_thread_count(threads);
        CLI::App* active = app.get_subcommands().at(0);
        std::optional<std::uint64_t> seed;
        if (active->count("--seed") > 0) seed = seed_value;
        tabpred::ExperimentConfig cfg = tabpred::load_experiment_config(config_path);
        if (seed) cfg.seed = *seed;
        if (cmd_synth->parsed()) return do_synth(cfg, out_dir, seed);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (cmd_run->parsed()) return do_run(cfg);
        if (cmd_impute->parsed()) return do_impute(cfg);
        if (cmd_resample->parsed()) return do_resample(cfg);
        if (cmd_rank->parsed()) return do_rank(cfg);
        if (cmd_cv->parsed()) return do_cv(cfg);
        if (cmd_search->parsed()) return do_search(cfg);
        return 1;
    } catch (const tabpred::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
