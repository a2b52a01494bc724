#include <cmath>

#include "tabpred/error.hpp"
#include "tabpred/model.hpp"
#include "tabpred/parallel.hpp"
#include "tabpred/rng.hpp"
#include "tabpred/tree.hpp"

namespace tabpred {
namespace {

class RandomForestModel final : public TrainedModel {
public:
    RandomForestModel(ModelSpec spec, std::vector<int> classes, std::vector<std::string> names,
                      const Matrix& X, const std::vector<int>& yi) :
        TrainedModel(std::move(spec), std::move(classes), std::move(names)) {
        const Hyperparams& hp = this->spec().hp;
        const std::size_t n_trees = hp.get_count("n_estimators");
        if (n_trees == 0) throw ValidationError("rf: n_estimators must be >= 1");

        TreeConfig config;
        config.criterion = TreeConfig::Criterion::entropy;
        config.splitter = TreeConfig::Splitter::best;
        config.max_depth = static_cast<int>(hp.get_count("max_depth"));
        config.min_samples_split = std::max<std::size_t>(2, hp.get_count("min_samples_split"));
        config.min_samples_leaf = std::max<std::size_t>(1, hp.get_count("min_samples_leaf"));
        config.max_features =
            static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(X.cols))));

        trees_.resize(n_trees);
        const std::size_t n = X.rows;
        parallel_for(n_trees, [&](std::size_t t) {
            TreeConfig tree_config = config;
            tree_config.tree_key = rng::mix(this->spec().seed, t);
            rng::Engine eng(rng::mix(tree_config.tree_key, rng::hash_string("bootstrap")));
            std::vector<std::size_t> rows(n);
            for (std::size_t i = 0; i < n; ++i) rows[i] = eng.below(n);
            trees_[t].fit(X, yi, this->classes().size(), feature_names(), tree_config, rows);
        });
    }

    const std::vector<DecisionTree>& trees() const { return trees_; }

protected:
    void score_row(std::span<const double> row, std::span<double> out) const override {
        std::fill(out.begin(), out.end(), 0.0);
        for (const DecisionTree& tree : trees_) {
            std::vector<double> freq = tree.class_frequencies(row);
            for (std::size_t c = 0; c < out.size(); ++c) out[c] += freq[c];
        }
        for (double& v : out) v /= static_cast<double>(trees_.size());
    }

    nlohmann::ordered_json params_json() const override {
        nlohmann::ordered_json forest = nlohmann::ordered_json::array();
        for (const DecisionTree& tree : trees_) {
            nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
            for (const DecisionTree::Node& n : tree.nodes()) {
                nodes.push_back({{"feature", n.feature},
                                 {"threshold", n.threshold},
                                 {"left", n.left},
                                 {"right", n.right},
                                 {"counts", n.class_counts}});
            }
            forest.push_back(std::move(nodes));
        }
        return {{"trees", std::move(forest)}};
    }

private:
    std::vector<DecisionTree> trees_;
};

} // namespace

std::unique_ptr<TrainedModel> train_random_forest(const Matrix& X, const std::vector<int>& y,
                                                  const std::vector<std::string>& names,
                                                  const ModelSpec& spec) {
    auto prepared = detail::prepare_labels(X, y, names, false, "rf");
    return std::make_unique<RandomForestModel>(spec, std::move(prepared.classes), names, X,
                                               prepared.indices);
}

} // namespace tabpred
