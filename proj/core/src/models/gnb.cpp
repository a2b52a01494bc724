#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tabpred/error.hpp"
#include "tabpred/model.hpp"

namespace tabpred {
namespace {

// Gaussian naive Bayes: per-class, per-feature mean and variance with a
// relative variance floor so constant features stay finite.
class GnbModel final : public TrainedModel {
public:
    GnbModel(ModelSpec spec, std::vector<int> classes, std::vector<std::string> names,
             const Matrix& X, const std::vector<int>& yi) :
        TrainedModel(std::move(spec), std::move(classes), std::move(names)) {
        const std::size_t n = X.rows, d = X.cols;
        const std::size_t n_classes = this->classes().size();

        means_ = Matrix(n_classes, d);
        vars_ = Matrix(n_classes, d);
        std::vector<double> counts(n_classes, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t c = static_cast<std::size_t>(yi[i]);
            counts[c] += 1.0;
            for (std::size_t j = 0; j < d; ++j) means_(c, j) += X(i, j);
        }
        for (std::size_t c = 0; c < n_classes; ++c)
            for (std::size_t j = 0; j < d; ++j) means_(c, j) /= counts[c];
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t c = static_cast<std::size_t>(yi[i]);
            for (std::size_t j = 0; j < d; ++j) {
                double diff = X(i, j) - means_(c, j);
                vars_(c, j) += diff * diff;
            }
        }
        for (std::size_t c = 0; c < n_classes; ++c)
            for (std::size_t j = 0; j < d; ++j) vars_(c, j) /= counts[c];

        // Floor: 1e-9 of the largest overall feature variance (absolute
        // 1e-9 when every feature is constant).
        std::vector<double> grand_mean(d, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) grand_mean[j] += X(i, j);
        for (std::size_t j = 0; j < d; ++j) grand_mean[j] /= static_cast<double>(n);
        double max_var = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            double v = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double diff = X(i, j) - grand_mean[j];
                v += diff * diff;
            }
            max_var = std::max(max_var, v / static_cast<double>(n));
        }
        double floor = 1e-9 * max_var;
        if (floor <= 0.0) floor = 1e-9;
        for (double& v : vars_.data) v = std::max(v, floor);

        log_priors_.resize(n_classes);
        for (std::size_t c = 0; c < n_classes; ++c)
            log_priors_[c] = std::log(counts[c] / static_cast<double>(n));
    }

    bool probabilistic() const override { return true; }

protected:
    void score_row(std::span<const double> row, std::span<double> out) const override {
        const std::size_t d = means_.cols;
        double max_lp = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < out.size(); ++c) {
            double lp = log_priors_[c];
            for (std::size_t j = 0; j < d; ++j) {
                double diff = row[j] - means_(c, j);
                lp -= 0.5 * (std::log(2.0 * std::numbers::pi * vars_(c, j)) +
                             diff * diff / vars_(c, j));
            }
            out[c] = lp;
            max_lp = std::max(max_lp, lp);
        }
        double sum = 0.0;
        for (double& v : out) {
            v = std::exp(v - max_lp);
            sum += v;
        }
        for (double& v : out) v /= sum;
    }

    nlohmann::ordered_json params_json() const override {
        return {{"means", means_.data},
                {"variances", vars_.data},
                {"log_priors", log_priors_}};
    }

private:
    Matrix means_;
    Matrix vars_;
    std::vector<double> log_priors_;
};

} // namespace

std::unique_ptr<TrainedModel> train_gnb(const Matrix& X, const std::vector<int>& y,
                                        const std::vector<std::string>& names,
                                        const ModelSpec& spec) {
    auto prepared = detail::prepare_labels(X, y, names, false, "gnb");
    return std::make_unique<GnbModel>(spec, std::move(prepared.classes), names, X,
                                      prepared.indices);
}

} // namespace tabpred
