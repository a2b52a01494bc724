#include "tabpred/tuning.hpp"

#include <cmath>
#include <string>

#include "tabpred/error.hpp"
#include "tabpred/parallel.hpp"
#include "tabpred/rng.hpp"

namespace tabpred {

namespace {

void validate_range(const std::string& name, const ParamRange& range) {
    switch (range.kind) {
    case ParamRange::Kind::choices:
        if (range.choices.empty())
            throw ValidationError("search space: '" + name + "' has no choices");
        break;
    case ParamRange::Kind::int_range:
        if (range.lo != std::floor(range.lo) || range.hi != std::floor(range.hi))
            throw ValidationError("search space: '" + name + "' integer bounds must be whole");
        if (range.lo > range.hi)
            throw ValidationError("search space: '" + name + "' has an empty integer range");
        break;
    case ParamRange::Kind::log_real:
        if (!(range.lo > 0.0) || range.lo > range.hi)
            throw ValidationError("search space: '" + name +
                                  "' log range needs 0 < low <= high");
        break;
    }
}

double draw_value(const ParamRange& range, rng::Engine& eng) {
    switch (range.kind) {
    case ParamRange::Kind::choices:
        return range.choices[eng.below(range.choices.size())];
    case ParamRange::Kind::int_range: {
        auto span = static_cast<std::uint64_t>(range.hi - range.lo) + 1;
        return range.lo + static_cast<double>(eng.below(span));
    }
    case ParamRange::Kind::log_real:
        if (range.lo == range.hi) return range.lo;
        return std::exp(eng.uniform(std::log(range.lo), std::log(range.hi)));
    }
    throw Error("unreachable");
}

} // namespace

SearchSpace search_space_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ValidationError("search space: expected a JSON object");
    SearchSpace space;
    if (doc.contains("draw_count")) {
        if (!doc["draw_count"].is_number_unsigned() || doc["draw_count"].get<std::uint64_t>() == 0)
            throw ValidationError("search space: draw_count must be a positive integer");
        space.draw_count = doc["draw_count"].get<std::size_t>();
    }
    if (doc.contains("seed")) space.seed = doc["seed"].get<std::uint64_t>();
    if (!doc.contains("params") || !doc["params"].is_object() || doc["params"].empty())
        throw ValidationError("search space: 'params' must be a non-empty object");
    for (const auto& [name, body] : doc["params"].items()) {
        if (!body.is_object() || body.size() != 1)
            throw ValidationError("search space: '" + name +
                                  "' must hold exactly one of choices/int_range/log_range");
        ParamRange range;
        if (body.contains("choices")) {
            range.kind = ParamRange::Kind::choices;
            range.choices = body["choices"].get<std::vector<double>>();
        } else if (body.contains("int_range")) {
            range.kind = ParamRange::Kind::int_range;
            auto bounds = body["int_range"].get<std::vector<double>>();
            if (bounds.size() != 2)
                throw ValidationError("search space: '" + name + "' int_range needs [low, high]");
            range.lo = bounds[0];
            range.hi = bounds[1];
        } else if (body.contains("log_range")) {
            range.kind = ParamRange::Kind::log_real;
            auto bounds = body["log_range"].get<std::vector<double>>();
            if (bounds.size() != 2)
                throw ValidationError("search space: '" + name + "' log_range needs [low, high]");
            range.lo = bounds[0];
            range.hi = bounds[1];
        } else {
            throw ValidationError("search space: '" + name +
                                  "' must hold one of choices/int_range/log_range");
        }
        validate_range(name, range);
        space.params[name] = range;
    }
    return space;
}

SearchResult random_search(const DataTable& table, ModelFamily family, const SearchSpace& space,
                           const std::vector<std::string>& features, const ResamplePlan& plan,
                           const CvOptions& cv) {
    if (space.params.empty()) throw ValidationError("random_search: empty search space");
    if (space.draw_count == 0) throw ValidationError("random_search: draw_count must be >= 1");
    Hyperparams probe(family);
    for (const auto& [name, range] : space.params) {
        probe.get(name); // rejects names the family does not define
        validate_range(name, range);
    }
    std::vector<std::string> used = features;
    if (used.empty()) used = table.schema().names();

    SearchResult result;
    result.trials.resize(space.draw_count);
    parallel_for(space.draw_count, [&](std::size_t t) {
        Trial& trial = result.trials[t];
        trial.index = t;
        rng::Engine eng(rng::mix(space.seed, rng::hash_string("trial-draw"), t));
        ModelSpec spec(family, rng::mix(cv.seed, rng::hash_string("trial-model"), t));
        for (const auto& [name, range] : space.params) spec.hp.set(name, draw_value(range, eng));
        trial.spec = spec;
        try {
            EvalReport report = cross_validate(table, spec, plan, used, cv);
            trial.mean_accuracy = report.accuracy.mean;
        } catch (const Error& e) {
            trial.failed = true;
            trial.error = e.what();
            trial.mean_accuracy = 0.0;
        }
    });

    result.best_index = 0;
    result.best_score = result.trials[0].mean_accuracy;
    for (std::size_t t = 1; t < result.trials.size(); ++t) {
        if (result.trials[t].mean_accuracy > result.best_score) {
            result.best_score = result.trials[t].mean_accuracy;
            result.best_index = t;
        }
    }
    result.best = result.trials[result.best_index].spec;
    return result;
}

nlohmann::ordered_json search_result_to_json(const SearchResult& result) {
    nlohmann::ordered_json trials = nlohmann::ordered_json::array();
    for (const Trial& t : result.trials) {
        trials.push_back({{"index", t.index},
                          {"hyperparameters", t.spec.hp.values()},
                          {"seed", t.spec.seed},
                          {"mean_accuracy", t.mean_accuracy},
                          {"failed", t.failed},
                          {"error", t.error}});
    }
    return {{"family", to_string(result.best.family)},
            {"best_index", result.best_index},
            {"best_score", result.best_score},
            {"best_hyperparameters", result.best.hp.values()},
            {"trials", trials}};
}

} // namespace tabpred
