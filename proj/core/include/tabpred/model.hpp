#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tabpred/linalg.hpp"

namespace tabpred {

enum class ModelFamily { rf, logistic, svm, knn, gboost, lda, gnb, dnn, lstm };

std::string to_string(ModelFamily family);
ModelFamily model_family_from_string(const std::string& text);
const std::vector<ModelFamily>& all_model_families();
// logistic, svm and gboost are binary-only; the rest handle any class count.
bool supports_multiclass(ModelFamily family);

// Numeric hyperparameters per family, keyed by their conventional names.
// Construction installs the documented defaults; setting an unknown name
// throws, which is what rejects malformed search spaces and configs early.
class Hyperparams {
public:
    explicit Hyperparams(ModelFamily family);

    ModelFamily family() const { return family_; }
    double get(const std::string& name) const;
    // get() narrowed to a nonnegative integer; throws on fractional values.
    std::size_t get_count(const std::string& name) const;
    void set(const std::string& name, double value);
    const std::map<std::string, double>& values() const { return values_; }

    static const std::map<std::string, double>& defaults(ModelFamily family);
    // Non-numeric settings that are fixed by construction (kernel type,
    // solver, criterion, ...) — echoed into reports and serialized models.
    static const std::vector<std::pair<std::string, std::string>>&
    fixed_settings(ModelFamily family);

private:
    ModelFamily family_;
    std::map<std::string, double> values_;
};

struct ModelSpec {
    ModelFamily family = ModelFamily::rf;
    Hyperparams hp{ModelFamily::rf};
    std::uint64_t seed = 0;

    ModelSpec() = default;
    explicit ModelSpec(ModelFamily f, std::uint64_t model_seed = 0)
        : family(f), hp(f), seed(model_seed) {}
};

// A fitted classifier. Scores align with classes() (ascending original
// labels); probabilistic families emit per-row distributions, the margin
// family (svm) emits (-f, +f) around its decision value.
class TrainedModel {
public:
    virtual ~TrainedModel() = default;

    const ModelSpec& spec() const { return spec_; }
    ModelFamily family() const { return spec_.family; }
    const std::vector<int>& classes() const { return classes_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    // Objective/loss trace for iterative trainers; empty otherwise.
    const std::vector<double>& iteration_log() const { return iteration_log_; }
    const std::vector<std::string>& notes() const { return notes_; }

    virtual bool probabilistic() const { return true; }
    // Binary decision threshold on the positive-class score when the caller
    // does not supply one: 0.5 for probabilities, 0 for margins.
    double default_threshold() const { return probabilistic() ? 0.5 : 0.0; }

    // One row per input row, one column per class.
    Matrix predict_scores(const Matrix& X) const;

    // Versioned document with the spec, class list, feature names and all
    // fitted parameter arrays; enough to audit or re-serve the model.
    nlohmann::ordered_json to_json() const;

protected:
    TrainedModel(ModelSpec spec, std::vector<int> classes, std::vector<std::string> names)
        : spec_(std::move(spec)), classes_(std::move(classes)),
          feature_names_(std::move(names)) {}

    virtual void score_row(std::span<const double> row, std::span<double> out) const = 0;
    virtual nlohmann::ordered_json params_json() const = 0;

    std::vector<double> iteration_log_;
    std::vector<std::string> notes_;

private:
    ModelSpec spec_;
    std::vector<int> classes_;
    std::vector<std::string> feature_names_;
};

// Validates (dense X, matching lengths, >= 2 classes, family class-count
// support) and dispatches to the family trainer. Deterministic in
// (spec, X, y) regardless of thread count.
std::unique_ptr<TrainedModel> fit(const ModelSpec& spec, const Matrix& X,
                                  const std::vector<int>& y,
                                  const std::vector<std::string>& feature_names);

// Binary: predicts the larger class label iff its score >= threshold (ties
// predict positive); default threshold is the model's default_threshold().
// Multiclass: argmax, ties to the lowest class label.
std::vector<int> predict_labels(const TrainedModel& model, const Matrix& X,
                                std::optional<double> positive_threshold = std::nullopt);

std::unique_ptr<TrainedModel> train_random_forest(const Matrix& X, const std::vector<int>& y,
                                                  const std::vector<std::string>& names,
                                                  const ModelSpec& spec);
std::unique_ptr<TrainedModel> train_logistic(const Matrix& X, const std::vector<int>& y,
                                             const std::vector<std::string>& names,
                                             const ModelSpec& spec);
std::unique_ptr<TrainedModel> train_svm(const Matrix& X, const std::vector<int>& y,
                                        const std::vector<std::string>& names,
                                        const ModelSpec& spec);
std::unique_ptr<TrainedModel> train_knn(const Matrix& X, const std::vector<int>& y,
                                        const std::vector<std::string>& names,
                                        const ModelSpec& spec);
std::unique_ptr<TrainedModel> train_gboost(const Matrix& X, const std::vector<int>& y,
                                           const std::vector<std::string>& names,
                                           const ModelSpec& spec);
std::unique_ptr<TrainedModel> train_lda(const Matrix& X, const std::vector<int>& y,
                                        const std::vector<std::string>& names,
                                        const ModelSpec& spec);
std::unique_ptr<TrainedModel> train_gnb(const Matrix& X, const std::vector<int>& y,
                                        const std::vector<std::string>& names,
                                        const ModelSpec& spec);
std::unique_ptr<TrainedModel> train_dnn(const Matrix& X, const std::vector<int>& y,
                                        const std::vector<std::string>& names,
                                        const ModelSpec& spec);
std::unique_ptr<TrainedModel> train_lstm(const Matrix& X, const std::vector<int>& y,
                                         const std::vector<std::string>& names,
                                         const ModelSpec& spec);

namespace detail {
// Shared fit-entry validation: returns ascending distinct labels and y
// remapped to class indices.
struct PreparedLabels {
    std::vector<int> classes;
    std::vector<int> indices;
};
PreparedLabels prepare_labels(const Matrix& X, const std::vector<int>& y,
                              const std::vector<std::string>& names, bool binary_only,
                              const char* family_name);
} // namespace detail

} // namespace tabpred
