#include <algorithm>
#include <cmath>

#include "tabpred/error.hpp"
#include "tabpred/model.hpp"

namespace tabpred {
namespace {

// Exact-search nearest neighbors with inverse-distance voting. An exact
// match (distance 0) takes the whole vote: only zero-distance neighbors
// count then. Equidistant neighbors break ties toward the lower row index.
class KnnModel final : public TrainedModel {
public:
    KnnModel(ModelSpec spec, std::vector<int> classes, std::vector<std::string> names,
             const Matrix& X, std::vector<int> yi) :
        TrainedModel(std::move(spec), std::move(classes), std::move(names)), X_(X),
        yi_(std::move(yi)) {
        const Hyperparams& hp = this->spec().hp;
        k_ = hp.get_count("n_neighbors");
        p_ = hp.get("p");
        if (k_ == 0) throw ValidationError("knn: n_neighbors must be >= 1");
        if (p_ < 1.0) throw ValidationError("knn: p must be >= 1");
        if (k_ > X.rows) {
            notes_.push_back("n_neighbors " + std::to_string(k_) + " clamped to the " +
                             std::to_string(X.rows) + " training rows");
            k_ = X.rows;
        }
    }

protected:
    void score_row(std::span<const double> row, std::span<double> out) const override {
        const std::size_t n = X_.rows, d = X_.cols;
        std::vector<std::pair<double, std::size_t>> dist(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::span<const double> train = X_.row(i);
            double sum = 0.0;
            if (p_ == 2.0) {
                for (std::size_t j = 0; j < d; ++j) {
                    double diff = train[j] - row[j];
                    sum += diff * diff;
                }
                dist[i] = {std::sqrt(sum), i};
            } else {
                for (std::size_t j = 0; j < d; ++j)
                    sum += std::pow(std::abs(train[j] - row[j]), p_);
                dist[i] = {std::pow(sum, 1.0 / p_), i};
            }
        }
        std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_ - 1),
                         dist.end());

        std::fill(out.begin(), out.end(), 0.0);
        bool exact = false;
        for (std::size_t i = 0; i < k_; ++i)
            if (dist[i].first == 0.0) exact = true;
        double total = 0.0;
        for (std::size_t i = 0; i < k_; ++i) {
            const auto& [distance, idx] = dist[i];
            double w;
            if (exact) {
                if (distance != 0.0) continue;
                w = 1.0;
            } else {
                w = 1.0 / distance;
            }
            out[static_cast<std::size_t>(yi_[idx])] += w;
            total += w;
        }
        for (double& v : out) v /= total;
    }

    nlohmann::ordered_json params_json() const override {
        return {{"n_neighbors", k_},
                {"p", p_},
                {"training_rows", X_.rows},
                {"training_matrix", X_.data},
                {"training_labels", yi_}};
    }

private:
    Matrix X_;
    std::vector<int> yi_;
    std::size_t k_ = 7;
    double p_ = 2.0;
};

} // namespace

std::unique_ptr<TrainedModel> train_knn(const Matrix& X, const std::vector<int>& y,
                                        const std::vector<std::string>& names,
                                        const ModelSpec& spec) {
    auto prepared = detail::prepare_labels(X, y, names, false, "knn");
    return std::make_unique<KnnModel>(spec, std::move(prepared.classes), names, X,
                                      std::move(prepared.indices));
}

} // namespace tabpred
