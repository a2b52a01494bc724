#include "tabpred/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <utility>

#include "tabpred/error.hpp"
#include "tabpred/impute.hpp"
#include "tabpred/parallel.hpp"
#include "tabpred/report.hpp"
#include "tabpred/rng.hpp"

namespace tabpred {

std::string to_string(Outcome outcome) {
    switch (outcome) {
    case Outcome::last_status: return "last_status";
    case Outcome::icu_needed: return "icu_needed";
    case Outcome::ventilated_days: return "ventilated_days";
    }
    throw Error("invalid outcome");
}

Outcome outcome_from_string(const std::string& text) {
    if (text == "last_status") return Outcome::last_status;
    if (text == "icu_needed") return Outcome::icu_needed;
    if (text == "ventilated_days") return Outcome::ventilated_days;
    throw ValidationError("unknown outcome '" + text +
                          "' (expected last_status, icu_needed or ventilated_days)");
}

namespace {

ResampleMode variant_from_string(const std::string& text) {
    if (text == "original") return ResampleMode::none;
    if (text == "oversampled") return ResampleMode::oversample;
    if (text == "undersampled") return ResampleMode::undersample;
    throw ValidationError("unknown dataset_variant '" + text +
                          "' (expected original, oversampled or undersampled)");
}

std::string variant_to_string(ResampleMode mode) {
    switch (mode) {
    case ResampleMode::none: return "original";
    case ResampleMode::oversample: return "oversampled";
    case ResampleMode::undersample: return "undersampled";
    }
    throw Error("invalid resample mode");
}

std::size_t require_count(const nlohmann::ordered_json& value, const std::string& key,
                          std::size_t minimum) {
    if (!value.is_number_unsigned())
        throw ValidationError("config: '" + key + "' must be a nonnegative integer");
    auto v = value.get<std::size_t>();
    if (v < minimum)
        throw ValidationError("config: '" + key + "' must be at least " +
                              std::to_string(minimum));
    return v;
}

template <typename Fn>
auto run_stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        throw ValidationError(name + ": " + e.what());
    } catch (const Error& e) {
        throw Error(name + ": " + e.what());
    } catch (const std::exception& e) {
        throw Error(name + ": " + e.what());
    }
}

} // namespace

ExperimentConfig experiment_config_from_json(const nlohmann::ordered_json& doc) {
    if (!doc.is_object()) throw ValidationError("config: expected a JSON object");
    ExperimentConfig cfg;
    cfg.raw = doc;
    bool saw_variant = false, saw_positive = false, saw_bin = false;

    for (const auto& [key, value] : doc.items()) {
        try {
            if (key == "dataset") {
                cfg.dataset = value.get<std::string>();
            } else if (key == "schema") {
                cfg.schema = value.get<std::string>();
            } else if (key == "outcome") {
                cfg.outcome = outcome_from_string(value.get<std::string>());
            } else if (key == "label_column") {
                cfg.label_column = value.get<std::string>();
            } else if (key == "positive_label") {
                if (!value.is_number_integer() && !value.is_number_unsigned())
                    throw ValidationError("config: 'positive_label' must be an integer");
                cfg.positive_label = value.get<int>();
                saw_positive = true;
            } else if (key == "dataset_variant") {
                cfg.variant = variant_from_string(value.get<std::string>());
                saw_variant = true;
            } else if (key == "bin_count") {
                if (!value.is_number_unsigned())
                    throw ValidationError("config: 'bin_count' must be a nonnegative integer");
                cfg.bin_count = value.get<int>();
                saw_bin = true;
            } else if (key == "feature_selector") {
                cfg.selector = importance_method_from_string(value.get<std::string>());
            } else if (key == "top_k") {
                if (!value.is_array() || value.empty())
                    throw ValidationError("config: 'top_k' must be a non-empty array");
                for (const auto& entry : value)
                    cfg.top_k.push_back(require_count(entry, "top_k", 1));
                cfg.top_k_explicit = true;
            } else if (key == "models") {
                if (!value.is_array()) throw ValidationError("config: 'models' must be an array");
                if (value.empty())
                    throw ValidationError("config: 'models' must not be empty");
                for (const auto& name : value)
                    cfg.families.push_back(model_family_from_string(name.get<std::string>()));
            } else if (key == "fold_count") {
                cfg.fold_count = require_count(value, key, 2);
            } else if (key == "seed") {
                if (!value.is_number_unsigned())
                    throw ValidationError("config: 'seed' must be a nonnegative integer");
                cfg.seed = value.get<std::uint64_t>();
            } else if (key == "output_dir") {
                cfg.output_dir = value.get<std::string>();
            } else if (key == "impute_scope") {
                cfg.impute_scope = impute_scope_from_string(value.get<std::string>());
            } else if (key == "imputer_k") {
                cfg.imputer_k = require_count(value, key, 1);
            } else if (key == "ranking_trees") {
                cfg.ranking_trees = require_count(value, key, 1);
            } else if (key == "hyperparameters") {
                if (!value.is_object())
                    throw ValidationError("config: 'hyperparameters' must be an object");
                for (const auto& [fam_name, params] : value.items()) {
                    ModelFamily fam = model_family_from_string(fam_name);
                    if (!params.is_object())
                        throw ValidationError("config: hyperparameters." + fam_name +
                                              " must be an object");
                    Hyperparams probe(fam);
                    for (const auto& [pname, pval] : params.items()) {
                        if (!pval.is_number())
                            throw ValidationError("config: hyperparameters." + fam_name + "." +
                                                  pname + " must be a number");
                        double v = pval.get<double>();
                        probe.set(pname, v); // rejects unknown names
                        cfg.overrides[fam][pname] = v;
                    }
                }
            } else if (key == "search") {
                cfg.search = value;
            } else if (key == "synth") {
                cfg.synth = value;
            } else {
                throw ValidationError("config: unknown key '" + key + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("config: key '" + key + "': " + e.what());
        }
    }

    if (cfg.dataset.empty()) throw ValidationError("config: 'dataset' is required");
    if (cfg.schema.empty()) throw ValidationError("config: 'schema' is required");
    if (cfg.label_column.empty()) cfg.label_column = to_string(cfg.outcome);
    if (!saw_variant)
        cfg.variant = cfg.outcome == Outcome::ventilated_days ? ResampleMode::oversample
                                                              : ResampleMode::none;
    if (!saw_positive) cfg.positive_label = cfg.outcome == Outcome::icu_needed ? 0 : 1;
    if (cfg.outcome == Outcome::ventilated_days) {
        if (!saw_bin)
            throw ValidationError("config: outcome ventilated_days requires 'bin_count'");
        if (cfg.bin_count < 3 || cfg.bin_count > 7)
            throw ValidationError("config: bin_count must lie in 3..7");
    } else if (saw_bin) {
        throw ValidationError("config: 'bin_count' only applies to outcome ventilated_days");
    }
    if (cfg.families.empty()) {
        if (cfg.outcome == Outcome::ventilated_days) {
            cfg.families = {ModelFamily::dnn};
        } else {
            cfg.families = all_model_families();
        }
    }
    if (cfg.top_k_explicit) {
        std::set<std::size_t> seen(cfg.top_k.begin(), cfg.top_k.end());
        if (seen.size() != cfg.top_k.size())
            throw ValidationError("config: 'top_k' entries must be distinct");
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path.string());
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("config JSON parse error in " + path.string() + ": " + e.what());
    }
    return experiment_config_from_json(doc);
}

nlohmann::ordered_json effective_config_json(const ExperimentConfig& config) {
    nlohmann::ordered_json families = nlohmann::ordered_json::array();
    for (ModelFamily f : config.families) families.push_back(to_string(f));
    nlohmann::ordered_json overrides = nlohmann::ordered_json::object();
    for (const auto& [family, params] : config.overrides)
        overrides[to_string(family)] = params;
    nlohmann::ordered_json doc{{"dataset", config.dataset.string()},
                               {"schema", config.schema.string()},
                               {"outcome", to_string(config.outcome)},
                               {"label_column", config.label_column},
                               {"dataset_variant", variant_to_string(config.variant)},
                               {"feature_selector", to_string(config.selector)},
                               {"top_k", config.top_k},
                               {"models", families},
                               {"fold_count", config.fold_count},
                               {"seed", config.seed},
                               {"output_dir", config.output_dir.string()},
                               {"impute_scope", to_string(config.impute_scope)},
                               {"imputer_k", config.imputer_k},
                               {"ranking_trees", config.ranking_trees},
                               {"hyperparameters", overrides}};
    if (config.outcome == Outcome::ventilated_days)
        doc["bin_count"] = config.bin_count;
    else
        doc["positive_label"] = config.positive_label;
    return doc;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    if (config.output_dir.empty()) throw ValidationError("run: 'output_dir' is required");
    if (config.families.empty()) throw ValidationError("run: no model families configured");

    ExperimentResult result;

    FeatureSchema schema =
        run_stage("ingest", [&] { return FeatureSchema::load(config.schema); });
    DataTable table = run_stage(
        "ingest", [&] { return DataTable::parse_csv(config.dataset, schema, config.label_column); });

    if (config.outcome == Outcome::ventilated_days) {
        run_stage("binning", [&] { bin_label_days(table, BinSpec{config.bin_count}); });
    } else {
        run_stage("ingest", [&] {
            auto labels = table.distinct_labels();
            if (labels.size() != 2)
                throw ValidationError("outcome " + to_string(config.outcome) + " expects " +
                                      "exactly two classes, found " +
                                      std::to_string(labels.size()));
        });
    }

    const std::size_t width = schema.size();
    std::vector<std::size_t> ks = config.top_k;
    if (config.top_k_explicit) {
        for (std::size_t k : ks)
            if (k > width)
                throw ValidationError("config: top_k value " + std::to_string(k) + " exceeds the " +
                                      std::to_string(width) + " available features");
    } else {
        for (std::size_t k : {std::size_t{3}, std::size_t{4}, std::size_t{5}, std::size_t{6},
                              std::size_t{8}, std::size_t{10}})
            if (k <= width) ks.push_back(k);
        if (ks.empty()) ks.push_back(width);
    }

    // Ranking always sees the fully imputed table; fold-scoped imputation is
    // an evaluation concern.
    DataTable dense = table;
    run_stage("imputation", [&] {
        fill_boolean(dense);
        knn_impute(dense, ImputerConfig{config.imputer_k});
    });

    result.importances = run_stage("ranking", [&] {
        std::vector<ImportanceVector> both;
        for (ImportanceMethod method :
             {ImportanceMethod::extra_trees, ImportanceMethod::random_forest})
            both.push_back(impurity_importance(
                dense, method, config.ranking_trees,
                rng::mix(config.seed, rng::hash_string("ranking"),
                         rng::hash_string(to_string(method)))));
        return both;
    });
    const ImportanceVector& selected =
        config.selector == ImportanceMethod::extra_trees ? result.importances[0]
                                                         : result.importances[1];
    for (const auto& [name, value] : selected.entries) result.ranking.push_back(name);

    const DataTable& cv_table =
        config.impute_scope == ImputeScope::whole_table ? dense : table;
    ResamplePlan plan{config.variant, rng::mix(config.seed, rng::hash_string("resample"))};
    CvOptions options;
    options.fold_count = config.fold_count;
    options.seed = rng::mix(config.seed, rng::hash_string("cv"));
    options.impute_scope = config.impute_scope;
    options.imputer.k = config.imputer_k;
    options.positive_label = config.positive_label;

    struct Task {
        std::size_t k = 0;
        ModelFamily family = ModelFamily::rf;
    };
    std::vector<Task> tasks;
    for (std::size_t k : ks)
        for (ModelFamily family : config.families) tasks.push_back({k, family});

    result.reports.resize(tasks.size());
    parallel_for(tasks.size(), [&](std::size_t i) {
        const Task& task = tasks[i];
        std::string stage_name =
            "evaluation " + to_string(task.family) + " top-" + std::to_string(task.k);
        result.reports[i] = run_stage(stage_name, [&] {
            std::vector<std::string> features = select_top_k(selected, task.k);
            ModelSpec spec(task.family,
                           rng::mix(config.seed, rng::hash_string(to_string(task.family)),
                                    task.k));
            if (auto it = config.overrides.find(task.family); it != config.overrides.end())
                for (const auto& [name, v] : it->second) spec.hp.set(name, v);
            return cross_validate(cv_table, spec, plan, features, options);
        });
    });

    try {
        run_stage("artifacts", [&] {
            std::filesystem::create_directories(config.output_dir);
            auto mark = [&](const std::string& file) {
                result.written.push_back(config.output_dir / file);
                return result.written.back();
            };

            write_json_file(importance_to_json(result.importances[0]),
                            mark("importance_extra_trees.json"));
            write_json_file(importance_to_json(result.importances[1]),
                            mark("importance_random_forest.json"));

            for (std::size_t i = 0; i < tasks.size(); ++i) {
                const EvalReport& r = result.reports[i];
                if (r.binary) {
                    std::vector<RocSeries> series;
                    for (std::size_t f = 0; f < r.fold_count; ++f)
                        series.push_back({"fold " + std::to_string(f + 1), r.roc_per_fold[f],
                                          r.fold_metrics[f].auc});
                    series.push_back({"pooled", r.roc_pooled, r.pooled_auc});
                    render_roc_svg(series, mark("roc_" + to_string(tasks[i].family) + "_" +
                                                std::to_string(tasks[i].k) + ".svg"));
                } else {
                    // Every row is held out exactly once, so summing the fold
                    // matrices gives the whole-run confusion matrix.
                    std::size_t n_classes = r.classes.size();
                    std::vector<std::vector<std::size_t>> pooled(
                        n_classes, std::vector<std::size_t>(n_classes, 0));
                    for (const auto& fold : r.confusion)
                        for (std::size_t a = 0; a < n_classes; ++a)
                            for (std::size_t b = 0; b < n_classes; ++b)
                                pooled[a][b] += fold[a][b];
                    auto texts = bin_label_texts(BinSpec{config.bin_count});
                    std::vector<std::string> labels;
                    for (int cls : r.classes) labels.push_back(texts.at(static_cast<std::size_t>(cls)));
                    std::string name = config.families.size() == 1
                                           ? "confusion_" + std::to_string(config.bin_count) +
                                                 "_" + std::to_string(tasks[i].k) + ".csv"
                                           : "confusion_" + to_string(tasks[i].family) + "_" +
                                                 std::to_string(config.bin_count) + "_" +
                                                 std::to_string(tasks[i].k) + ".csv";
                    render_confusion_csv(pooled, labels, mark(name));
                }
            }

            nlohmann::ordered_json effective = effective_config_json(config);
            effective["top_k"] = ks;
            nlohmann::ordered_json echo{{"given", config.raw}, {"effective", effective}};
            write_json_file(build_report_document(echo, result.importances, result.reports),
                            mark("report.json"));
        });
    } catch (...) {
        std::error_code ec;
        for (const auto& path : result.written) std::filesystem::remove(path, ec);
        result.written.clear();
        throw;
    }
    return result;
}

} // namespace tabpred
