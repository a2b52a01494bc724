#include "tabpred/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tabpred/error.hpp"
#include "tabpred/parallel.hpp"

namespace tabpred {

std::string to_string(ModelFamily family) {
    switch (family) {
    case ModelFamily::rf: return "rf";
    case ModelFamily::logistic: return "logistic";
    case ModelFamily::svm: return "svm";
    case ModelFamily::knn: return "knn";
    case ModelFamily::gboost: return "gboost";
    case ModelFamily::lda: return "lda";
    case ModelFamily::gnb: return "gnb";
    case ModelFamily::dnn: return "dnn";
    case ModelFamily::lstm: return "lstm";
    }
    throw Error("invalid model family");
}

ModelFamily model_family_from_string(const std::string& text) {
    for (ModelFamily f : all_model_families())
        if (to_string(f) == text) return f;
    throw ValidationError("unknown model family '" + text + "'");
}

const std::vector<ModelFamily>& all_model_families() {
    static const std::vector<ModelFamily> families = {
        ModelFamily::rf,  ModelFamily::logistic, ModelFamily::svm,
        ModelFamily::knn, ModelFamily::gboost,   ModelFamily::lda,
        ModelFamily::gnb, ModelFamily::dnn,      ModelFamily::lstm};
    return families;
}

bool supports_multiclass(ModelFamily family) {
    switch (family) {
    case ModelFamily::logistic:
    case ModelFamily::svm:
    case ModelFamily::gboost: return false;
    default: return true;
    }
}

const std::map<std::string, double>& Hyperparams::defaults(ModelFamily family) {
    static const std::map<ModelFamily, std::map<std::string, double>> table = {
        {ModelFamily::rf,
         {{"n_estimators", 50},
          {"max_depth", 10},
          {"min_samples_split", 8},
          {"min_samples_leaf", 1}}},
        {ModelFamily::logistic, {{"C", 1.0}, {"max_iter", 20}, {"tol", 1e-4}}},
        {ModelFamily::svm,
         {{"C", 1.0},
          {"gamma", 0.0}, // 0 = auto = 1 / feature count
          {"degree", 3},  // accepted for parity; unused by the rbf kernel
          {"tol", 1e-3},
          {"max_iter", 100000}}},
        {ModelFamily::knn,
         {{"n_neighbors", 7},
          {"leaf_size", 10}, // accepted and ignored by the exact search
          {"p", 2}}},
        {ModelFamily::gboost,
         {{"n_estimators", 100},
          {"learning_rate", 1.0},
          {"max_depth", 2},
          {"min_samples_split", 5},
          {"min_samples_leaf", 4}}},
        {ModelFamily::lda, {}},
        {ModelFamily::gnb, {}},
        {ModelFamily::dnn,
         {{"hidden1", 64},
          {"hidden2", 32},
          {"learning_rate", 1e-3},
          {"batch_size", 32},
          {"epochs", 500}}},
        {ModelFamily::lstm,
         {{"hidden", 64}, {"learning_rate", 1e-3}, {"batch_size", 32}, {"epochs", 500}}},
    };
    return table.at(family);
}

const std::vector<std::pair<std::string, std::string>>&
Hyperparams::fixed_settings(ModelFamily family) {
    static const std::map<ModelFamily, std::vector<std::pair<std::string, std::string>>> table = {
        {ModelFamily::rf, {{"criterion", "entropy"}, {"max_features", "sqrt"}}},
        {ModelFamily::logistic, {{"penalty", "l2"}, {"solver", "newton-cg"}}},
        {ModelFamily::svm, {{"kernel", "rbf"}, {"gamma", "auto"}}},
        {ModelFamily::knn, {{"weights", "distance"}, {"metric", "minkowski"}}},
        {ModelFamily::gboost, {{"loss", "deviance"}}},
        {ModelFamily::lda, {{"solver", "svd"}, {"n_components", "none"}}},
        {ModelFamily::gnb, {}},
        {ModelFamily::dnn, {{"activation", "relu"}, {"optimizer", "sgd"}}},
        {ModelFamily::lstm, {{"optimizer", "sgd"}}},
    };
    return table.at(family);
}

Hyperparams::Hyperparams(ModelFamily family) : family_(family), values_(defaults(family)) {}

double Hyperparams::get(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end())
        throw ValidationError("unknown hyperparameter '" + name + "' for family " +
                              to_string(family_));
    return it->second;
}

std::size_t Hyperparams::get_count(const std::string& name) const {
    double v = get(name);
    if (v < 0.0 || v != std::floor(v))
        throw ValidationError("hyperparameter '" + name + "' must be a nonnegative integer");
    return static_cast<std::size_t>(v);
}

void Hyperparams::set(const std::string& name, double value) {
    auto it = values_.find(name);
    if (it == values_.end())
        throw ValidationError("unknown hyperparameter '" + name + "' for family " +
                              to_string(family_));
    if (!std::isfinite(value))
        throw ValidationError("hyperparameter '" + name + "' must be finite");
    it->second = value;
}

Matrix TrainedModel::predict_scores(const Matrix& X) const {
    if (X.cols != feature_names_.size())
        throw Error("predict: expected " + std::to_string(feature_names_.size()) +
                    " features, got " + std::to_string(X.cols));
    Matrix scores(X.rows, classes_.size());
    parallel_for(X.rows, [&](std::size_t r) { score_row(X.row(r), scores.row(r)); });
    return scores;
}

nlohmann::ordered_json TrainedModel::to_json() const {
    nlohmann::ordered_json doc;
    doc["format_version"] = 1;
    doc["family"] = to_string(spec_.family);
    nlohmann::ordered_json hp = nlohmann::ordered_json::object();
    for (const auto& [name, value] : spec_.hp.values()) hp[name] = value;
    doc["hyperparameters"] = hp;
    nlohmann::ordered_json fixed = nlohmann::ordered_json::object();
    for (const auto& [name, value] : Hyperparams::fixed_settings(spec_.family))
        fixed[name] = value;
    doc["fixed_settings"] = fixed;
    doc["seed"] = spec_.seed;
    doc["classes"] = classes_;
    doc["feature_names"] = feature_names_;
    doc["iteration_log"] = iteration_log_;
    doc["notes"] = notes_;
    doc["parameters"] = params_json();
    return doc;
}

std::unique_ptr<TrainedModel> fit(const ModelSpec& spec, const Matrix& X,
                                  const std::vector<int>& y,
                                  const std::vector<std::string>& feature_names) {
    switch (spec.family) {
    case ModelFamily::rf: return train_random_forest(X, y, feature_names, spec);
    case ModelFamily::logistic: return train_logistic(X, y, feature_names, spec);
    case ModelFamily::svm: return train_svm(X, y, feature_names, spec);
    case ModelFamily::knn: return train_knn(X, y, feature_names, spec);
    case ModelFamily::gboost: return train_gboost(X, y, feature_names, spec);
    case ModelFamily::lda: return train_lda(X, y, feature_names, spec);
    case ModelFamily::gnb: return train_gnb(X, y, feature_names, spec);
    case ModelFamily::dnn: return train_dnn(X, y, feature_names, spec);
    case ModelFamily::lstm: return train_lstm(X, y, feature_names, spec);
    }
    throw Error("invalid model family");
}

std::vector<int> predict_labels(const TrainedModel& model, const Matrix& X,
                                std::optional<double> positive_threshold) {
    const Matrix scores = model.predict_scores(X);
    const std::vector<int>& classes = model.classes();
    std::vector<int> labels(X.rows);
    if (classes.size() == 2) {
        double threshold = positive_threshold.value_or(model.default_threshold());
        for (std::size_t r = 0; r < X.rows; ++r)
            labels[r] = scores(r, 1) >= threshold ? classes[1] : classes[0];
    } else {
        for (std::size_t r = 0; r < X.rows; ++r) {
            std::size_t best = 0;
            for (std::size_t c = 1; c < classes.size(); ++c)
                if (scores(r, c) > scores(r, best)) best = c;
            labels[r] = classes[best];
        }
    }
    return labels;
}

namespace detail {

PreparedLabels prepare_labels(const Matrix& X, const std::vector<int>& y,
                              const std::vector<std::string>& names, bool binary_only,
                              const char* family_name) {
    if (X.rows == 0) throw ValidationError(std::string(family_name) + ": empty training set");
    if (X.rows != y.size())
        throw ValidationError(std::string(family_name) + ": row/label count mismatch");
    if (names.size() != X.cols)
        throw ValidationError(std::string(family_name) + ": feature name count mismatch");
    for (double v : X.data)
        if (!std::isfinite(v))
            throw ValidationError(std::string(family_name) +
                                  ": training matrix has non-finite cells");

    std::set<int> distinct(y.begin(), y.end());
    if (distinct.size() < 2)
        throw ValidationError(std::string(family_name) + ": needs at least two classes");
    if (binary_only && distinct.size() != 2)
        throw ValidationError(std::string(family_name) + ": supports binary labels only, got " +
                              std::to_string(distinct.size()) + " classes");

    PreparedLabels out;
    out.classes.assign(distinct.begin(), distinct.end());
    out.indices.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        auto it = std::lower_bound(out.classes.begin(), out.classes.end(), y[i]);
        out.indices[i] = static_cast<int>(it - out.classes.begin());
    }
    return out;
}

} // namespace detail

} // namespace tabpred
