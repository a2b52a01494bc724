#include <algorithm>
#include <cmath>

#include "tabpred/error.hpp"
#include "tabpred/model.hpp"
#include "tabpred/tree.hpp"

namespace tabpred {
namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Stagewise gradient boosting on logistic deviance: the raw score starts at
// the base-rate log-odds and each stage adds a shallow regression tree fit
// to the residual t - sigmoid(F), with Newton-step leaf values.
class GboostModel final : public TrainedModel {
public:
    GboostModel(ModelSpec spec, std::vector<int> classes, std::vector<std::string> names,
                const Matrix& X, const std::vector<int>& yi) :
        TrainedModel(std::move(spec), std::move(classes), std::move(names)) {
        const Hyperparams& hp = this->spec().hp;
        const std::size_t n_stages = hp.get_count("n_estimators");
        learning_rate_ = hp.get("learning_rate");
        if (learning_rate_ < 0.0) throw ValidationError("gboost: learning_rate must be >= 0");

        RegressionTreeConfig tree_config;
        tree_config.max_depth = static_cast<int>(hp.get_count("max_depth"));
        tree_config.min_samples_split = std::max<std::size_t>(2, hp.get_count("min_samples_split"));
        tree_config.min_samples_leaf = std::max<std::size_t>(1, hp.get_count("min_samples_leaf"));

        const std::size_t n = X.rows;
        std::vector<double> t(n);
        double positives = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            t[i] = yi[i] == 1 ? 1.0 : 0.0;
            positives += t[i];
        }
        const double base_rate = positives / static_cast<double>(n);
        base_score_ = std::log(base_rate / (1.0 - base_rate));

        std::vector<double> raw(n, base_score_), prob(n), residual(n);
        // Stable log(1 + e^z); the per-sample deviance is softplus(-F) for
        // positives and softplus(F) for negatives.
        auto softplus = [](double z) {
            return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
        };
        auto deviance = [&]() {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                sum += t[i] > 0.5 ? softplus(-raw[i]) : softplus(raw[i]);
            return sum / static_cast<double>(n);
        };
        iteration_log_.push_back(deviance());

        stages_.reserve(n_stages);
        for (std::size_t stage = 0; stage < n_stages; ++stage) {
            for (std::size_t i = 0; i < n; ++i) {
                prob[i] = sigmoid(raw[i]);
                residual[i] = t[i] - prob[i];
            }
            RegressionTree tree;
            tree.fit(X, residual, tree_config, [&](const std::vector<std::size_t>& rows) {
                double num = 0.0, den = 0.0;
                for (std::size_t r : rows) {
                    num += residual[r];
                    den += prob[r] * (1.0 - prob[r]);
                }
                return num / std::max(den, 1e-12);
            });
            for (std::size_t i = 0; i < n; ++i)
                raw[i] += learning_rate_ * tree.predict(X.row(i));
            stages_.push_back(std::move(tree));
            iteration_log_.push_back(deviance());
        }
    }

    bool probabilistic() const override { return true; }

    double raw_score(std::span<const double> row) const {
        double f = base_score_;
        for (const RegressionTree& tree : stages_) f += learning_rate_ * tree.predict(row);
        return f;
    }

protected:
    void score_row(std::span<const double> row, std::span<double> out) const override {
        double p = sigmoid(raw_score(row));
        out[0] = 1.0 - p;
        out[1] = p;
    }

    nlohmann::ordered_json params_json() const override {
        nlohmann::ordered_json stages = nlohmann::ordered_json::array();
        for (const RegressionTree& tree : stages_) {
            nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
            for (const RegressionTree::Node& n : tree.nodes()) {
                nodes.push_back({{"feature", n.feature},
                                 {"threshold", n.threshold},
                                 {"left", n.left},
                                 {"right", n.right},
                                 {"value", n.value}});
            }
            stages.push_back(std::move(nodes));
        }
        return {{"base_score", base_score_},
                {"learning_rate", learning_rate_},
                {"stages", std::move(stages)}};
    }

private:
    double base_score_ = 0.0;
    double learning_rate_ = 1.0;
    std::vector<RegressionTree> stages_;
};

} // namespace

std::unique_ptr<TrainedModel> train_gboost(const Matrix& X, const std::vector<int>& y,
                                           const std::vector<std::string>& names,
                                           const ModelSpec& spec) {
    auto prepared = detail::prepare_labels(X, y, names, true, "gboost");
    return std::make_unique<GboostModel>(spec, std::move(prepared.classes), names, X,
                                         prepared.indices);
}

} // namespace tabpred
