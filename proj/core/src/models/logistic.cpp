#include <algorithm>
#include <cmath>

#include "tabpred/error.hpp"
#include "tabpred/model.hpp"

namespace tabpred {
namespace {

// log(1 + exp(-z)) without overflow for large |z|.
double log1p_exp_neg(double z) {
    if (z > 0.0) return std::log1p(std::exp(-z));
    return -z + std::log1p(std::exp(z));
}

// Penalized objective F(w, b) = 0.5 w'w + C * sum log(1 + exp(-s_i (x_i'w + b)))
// with s_i = ±1; the intercept is not penalized.
class LogisticModel final : public TrainedModel {
public:
    LogisticModel(ModelSpec spec, std::vector<int> classes, std::vector<std::string> names,
                  const Matrix& X, const std::vector<int>& yi) :
        TrainedModel(std::move(spec), std::move(classes), std::move(names)) {
        const Hyperparams& hp = this->spec().hp;
        const double C = hp.get("C");
        const std::size_t max_iter = hp.get_count("max_iter");
        const double tol = hp.get("tol");
        if (C <= 0.0) throw ValidationError("logistic: C must be positive");

        const std::size_t n = X.rows, d = X.cols;
        weights_.assign(d, 0.0);
        bias_ = 0.0;

        std::vector<double> sign(n);
        for (std::size_t i = 0; i < n; ++i) sign[i] = yi[i] == 1 ? 1.0 : -1.0;

        std::vector<double> margin(n), prob(n), grad_w(d), dir_w(d), trial_w(d);
        std::vector<double> residual(d + 1), cg_p(d + 1), cg_hp(d + 1), dir(d + 1);

        auto objective = [&](const std::vector<double>& w, double b) {
            double obj = 0.0;
            for (double v : w) obj += 0.5 * v * v;
            for (std::size_t i = 0; i < n; ++i) {
                double m = b;
                std::span<const double> row = X.row(i);
                for (std::size_t j = 0; j < d; ++j) m += w[j] * row[j];
                obj += C * log1p_exp_neg(sign[i] * m);
            }
            return obj;
        };

        double obj = objective(weights_, bias_);
        iteration_log_.push_back(obj);

        for (std::size_t iter = 0; iter < max_iter; ++iter) {
            // Gradient and the sigmoid weights for Hessian-vector products.
            for (std::size_t i = 0; i < n; ++i) {
                double m = bias_;
                std::span<const double> row = X.row(i);
                for (std::size_t j = 0; j < d; ++j) m += weights_[j] * row[j];
                margin[i] = m;
                prob[i] = 1.0 / (1.0 + std::exp(-m));
            }
            std::fill(grad_w.begin(), grad_w.end(), 0.0);
            double grad_b = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double t = sign[i] > 0.0 ? 1.0 : 0.0;
                double coeff = C * (prob[i] - t);
                std::span<const double> row = X.row(i);
                for (std::size_t j = 0; j < d; ++j) grad_w[j] += coeff * row[j];
                grad_b += coeff;
            }
            for (std::size_t j = 0; j < d; ++j) grad_w[j] += weights_[j];

            double grad_norm = std::abs(grad_b);
            for (double v : grad_w) grad_norm = std::max(grad_norm, std::abs(v));
            if (grad_norm <= tol) break;

            // Solve H dir = -grad by conjugate gradients. H v = [v_w, 0] +
            // C * sum p(1-p) (x'v_w + v_b) [x, 1].
            auto hessian_vec = [&](const std::vector<double>& v, std::vector<double>& out) {
                for (std::size_t j = 0; j < d; ++j) out[j] = v[j];
                out[d] = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    std::span<const double> row = X.row(i);
                    double dot = v[d];
                    for (std::size_t j = 0; j < d; ++j) dot += v[j] * row[j];
                    double coeff = C * prob[i] * (1.0 - prob[i]) * dot;
                    for (std::size_t j = 0; j < d; ++j) out[j] += coeff * row[j];
                    out[d] += coeff;
                }
            };

            std::fill(dir.begin(), dir.end(), 0.0);
            for (std::size_t j = 0; j < d; ++j) residual[j] = -grad_w[j];
            residual[d] = -grad_b;
            cg_p = residual;
            double rs = 0.0;
            for (double v : residual) rs += v * v;
            const double cg_tol = std::max(1e-20, 1e-10 * rs);
            for (std::size_t cg_iter = 0; cg_iter < 2 * (d + 1) + 10 && rs > cg_tol; ++cg_iter) {
                hessian_vec(cg_p, cg_hp);
                double p_hp = 0.0;
                for (std::size_t j = 0; j <= d; ++j) p_hp += cg_p[j] * cg_hp[j];
                if (p_hp <= 0.0) break; // numerically non-positive curvature
                double alpha = rs / p_hp;
                for (std::size_t j = 0; j <= d; ++j) {
                    dir[j] += alpha * cg_p[j];
                    residual[j] -= alpha * cg_hp[j];
                }
                double rs_new = 0.0;
                for (double v : residual) rs_new += v * v;
                double beta = rs_new / rs;
                rs = rs_new;
                for (std::size_t j = 0; j <= d; ++j) cg_p[j] = residual[j] + beta * cg_p[j];
            }
            bool have_dir = false;
            for (std::size_t j = 0; j <= d; ++j)
                if (dir[j] != 0.0) have_dir = true;
            if (!have_dir) {
                // Fall back to steepest descent if CG made no progress.
                for (std::size_t j = 0; j < d; ++j) dir[j] = -grad_w[j];
                dir[d] = -grad_b;
            }

            // Armijo halving line search on the penalized objective.
            double dir_dot_grad = dir[d] * grad_b;
            for (std::size_t j = 0; j < d; ++j) dir_dot_grad += dir[j] * grad_w[j];
            double step = 1.0;
            bool accepted = false;
            for (int halving = 0; halving < 40; ++halving) {
                for (std::size_t j = 0; j < d; ++j) trial_w[j] = weights_[j] + step * dir[j];
                double trial_b = bias_ + step * dir[d];
                double trial_obj = objective(trial_w, trial_b);
                if (trial_obj <= obj + 1e-4 * step * dir_dot_grad) {
                    weights_ = trial_w;
                    bias_ = trial_b;
                    obj = trial_obj;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) break;
            iteration_log_.push_back(obj);
        }
    }

    bool probabilistic() const override { return true; }
    const std::vector<double>& weights() const { return weights_; }
    double bias() const { return bias_; }

protected:
    void score_row(std::span<const double> row, std::span<double> out) const override {
        double m = bias_;
        for (std::size_t j = 0; j < weights_.size(); ++j) m += weights_[j] * row[j];
        double p = 1.0 / (1.0 + std::exp(-m));
        out[0] = 1.0 - p;
        out[1] = p;
    }

    nlohmann::ordered_json params_json() const override {
        return {{"weights", weights_}, {"bias", bias_}};
    }

private:
    std::vector<double> weights_;
    double bias_ = 0.0;
};

} // namespace

std::unique_ptr<TrainedModel> train_logistic(const Matrix& X, const std::vector<int>& y,
                                             const std::vector<std::string>& names,
                                             const ModelSpec& spec) {
    auto prepared = detail::prepare_labels(X, y, names, true, "logistic");
    return std::make_unique<LogisticModel>(spec, std::move(prepared.classes), names, X,
                                           prepared.indices);
}

} // namespace tabpred
