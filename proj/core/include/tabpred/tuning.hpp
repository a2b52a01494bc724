#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "tabpred/cross_validation.hpp"
#include "tabpred/data_table.hpp"
#include "tabpred/model.hpp"
#include "tabpred/rebalance.hpp"

namespace tabpred {

// One hyperparameter's sampling distribution.
struct ParamRange {
    enum class Kind { choices, int_range, log_real };

    Kind kind = Kind::choices;
    std::vector<double> choices; // kind == choices
    double lo = 0.0;             // int_range: inclusive; log_real: > 0
    double hi = 0.0;             // int_range: inclusive; log_real: >= lo
};

struct SearchSpace {
    std::map<std::string, ParamRange> params; // hyperparameter name -> range
    std::size_t draw_count = 1000;
    std::uint64_t seed = 0; // drives the draws only
};

// JSON form: {"params": {"max_depth": {"int_range": [2, 12]},
//                        "learning_rate": {"log_range": [1e-4, 1.0]},
//                        "n_estimators": {"choices": [50, 100]}},
//             "draw_count": 40, "seed": 7}
SearchSpace search_space_from_json(const nlohmann::json& doc);

struct Trial {
    std::size_t index = 0;
    ModelSpec spec;
    double mean_accuracy = 0.0; // 0 when the fit failed
    bool failed = false;
    std::string error; // failure note, empty otherwise
};

struct SearchResult {
    ModelSpec best;
    double best_score = 0.0;
    std::size_t best_index = 0;
    std::vector<Trial> trials; // ordered by trial index, always draw_count long
};

nlohmann::ordered_json search_result_to_json(const SearchResult& result);

// Randomized search: draws draw_count hyperparameter settings from the space
// (each drawn value is validated by name against the family's registry
// before any trial runs), cross-validates every draw with a split shared
// across trials, and returns the highest mean accuracy; ties go to the
// earlier draw. Failed fits stay in the log with score 0. An empty feature
// list means all schema columns.
SearchResult random_search(const DataTable& table, ModelFamily family, const SearchSpace& space,
                           const std::vector<std::string>& features = {},
                           const ResamplePlan& plan = {}, const CvOptions& cv = {});

} // namespace tabpred
