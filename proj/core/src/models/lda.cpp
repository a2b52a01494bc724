#include <algorithm>
#include <cmath>
#include <limits>

#include "tabpred/error.hpp"
#include "tabpred/model.hpp"

namespace tabpred {
namespace {

// Linear discriminant analysis fit through a spectral decomposition of the
// pooled within-class scatter (never an explicit inverse): a 1e-9 ridge
// keeps rank-deficient scatters (duplicated columns, tiny classes) solvable.
class LdaModel final : public TrainedModel {
public:
    LdaModel(ModelSpec spec, std::vector<int> classes, std::vector<std::string> names,
             const Matrix& X, const std::vector<int>& yi) :
        TrainedModel(std::move(spec), std::move(classes), std::move(names)) {
        const std::size_t n = X.rows, d = X.cols;
        const std::size_t n_classes = this->classes().size();

        means_ = Matrix(n_classes, d);
        std::vector<double> counts(n_classes, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t c = static_cast<std::size_t>(yi[i]);
            counts[c] += 1.0;
            for (std::size_t j = 0; j < d; ++j) means_(c, j) += X(i, j);
        }
        for (std::size_t c = 0; c < n_classes; ++c)
            for (std::size_t j = 0; j < d; ++j) means_(c, j) /= counts[c];

        log_priors_.resize(n_classes);
        for (std::size_t c = 0; c < n_classes; ++c)
            log_priors_[c] = std::log(counts[c] / static_cast<double>(n));

        // Pooled within-class scatter / (n - K), plus the ridge.
        Matrix scatter(d, d);
        std::vector<double> centered(d);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t c = static_cast<std::size_t>(yi[i]);
            for (std::size_t j = 0; j < d; ++j) centered[j] = X(i, j) - means_(c, j);
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = a; b < d; ++b) scatter(a, b) += centered[a] * centered[b];
        }
        double denom = static_cast<double>(n) - static_cast<double>(n_classes);
        if (denom < 1.0) denom = 1.0;
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = a; b < d; ++b) {
                scatter(a, b) /= denom;
                scatter(b, a) = scatter(a, b);
            }
        for (std::size_t a = 0; a < d; ++a) scatter(a, a) += 1e-9;

        const SymmetricEigen eig = jacobi_eigen(scatter);

        // w_c = V diag(1/lambda) V' mu_c and the matching quadratic offsets.
        coef_ = Matrix(n_classes, d);
        offsets_.resize(n_classes);
        std::vector<double> projected(d);
        for (std::size_t c = 0; c < n_classes; ++c) {
            for (std::size_t e = 0; e < d; ++e) {
                double dot = 0.0;
                for (std::size_t j = 0; j < d; ++j) dot += eig.vectors(j, e) * means_(c, j);
                projected[e] = eig.values[e] > 0.0 ? dot / eig.values[e] : 0.0;
            }
            for (std::size_t j = 0; j < d; ++j) {
                double w = 0.0;
                for (std::size_t e = 0; e < d; ++e) w += eig.vectors(j, e) * projected[e];
                coef_(c, j) = w;
            }
            double quad = 0.0;
            for (std::size_t j = 0; j < d; ++j) quad += coef_(c, j) * means_(c, j);
            offsets_[c] = log_priors_[c] - 0.5 * quad;
        }
    }

    bool probabilistic() const override { return true; }

protected:
    void score_row(std::span<const double> row, std::span<double> out) const override {
        const std::size_t d = coef_.cols;
        double max_disc = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < out.size(); ++c) {
            double disc = offsets_[c];
            for (std::size_t j = 0; j < d; ++j) disc += coef_(c, j) * row[j];
            out[c] = disc;
            max_disc = std::max(max_disc, disc);
        }
        double sum = 0.0;
        for (double& v : out) {
            v = std::exp(v - max_disc);
            sum += v;
        }
        for (double& v : out) v /= sum;
    }

    nlohmann::ordered_json params_json() const override {
        return {{"coefficients", coef_.data},
                {"offsets", offsets_},
                {"class_means", means_.data},
                {"log_priors", log_priors_}};
    }

private:
    Matrix means_;
    Matrix coef_; // class x feature discriminant weights
    std::vector<double> offsets_;
    std::vector<double> log_priors_;
};

} // namespace

std::unique_ptr<TrainedModel> train_lda(const Matrix& X, const std::vector<int>& y,
                                        const std::vector<std::string>& names,
                                        const ModelSpec& spec) {
    auto prepared = detail::prepare_labels(X, y, names, false, "lda");
    return std::make_unique<LdaModel>(spec, std::move(prepared.classes), names, X,
                                      prepared.indices);
}

} // namespace tabpred
