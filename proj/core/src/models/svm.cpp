#include <algorithm>
#include <cmath>

#include "tabpred/error.hpp"
#include "tabpred/model.hpp"

namespace tabpred {
namespace {

// Soft-margin rbf SVM fit by sequential minimal optimization. The solver is
// fully deterministic: the first multiplier comes from fixed-order scans and
// the partner maximizes |E1 - E2| with index tie-breaks, so no randomness is
// involved anywhere.
class SvmModel final : public TrainedModel {
public:
    SvmModel(ModelSpec spec, std::vector<int> classes, std::vector<std::string> names,
             const Matrix& X, const std::vector<int>& yi) :
        TrainedModel(std::move(spec), std::move(classes), std::move(names)) {
        const Hyperparams& hp = this->spec().hp;
        C_ = hp.get("C");
        tol_ = hp.get("tol");
        gamma_ = hp.get("gamma");
        const std::size_t max_updates = hp.get_count("max_iter");
        if (C_ <= 0.0) throw ValidationError("svm: C must be positive");
        if (tol_ <= 0.0) throw ValidationError("svm: tol must be positive");
        if (gamma_ < 0.0) throw ValidationError("svm: gamma must be nonnegative (0 = auto)");
        if (gamma_ == 0.0) gamma_ = 1.0 / static_cast<double>(X.cols);

        const std::size_t n = X.rows;
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = yi[i] == 1 ? 1.0 : -1.0;

        // Full kernel cache; training sets here are fold-sized.
        Matrix K(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            K(i, i) = 1.0;
            for (std::size_t j = i + 1; j < n; ++j) {
                double d2 = 0.0;
                std::span<const double> a = X.row(i), b = X.row(j);
                for (std::size_t f = 0; f < X.cols; ++f) {
                    double diff = a[f] - b[f];
                    d2 += diff * diff;
                }
                double k = std::exp(-gamma_ * d2);
                K(i, j) = k;
                K(j, i) = k;
            }
        }

        std::vector<double> alpha(n, 0.0);
        std::vector<double> err(n); // E_i = f(x_i) - y_i, maintained incrementally
        for (std::size_t i = 0; i < n; ++i) err[i] = -y[i];
        double b = 0.0;
        std::size_t updates = 0;

        auto take_step = [&](std::size_t i, std::size_t j) -> bool {
            if (i == j) return false;
            const double s = y[i] * y[j];
            double L, H;
            if (y[i] != y[j]) {
                L = std::max(0.0, alpha[j] - alpha[i]);
                H = std::min(C_, C_ + alpha[j] - alpha[i]);
            } else {
                L = std::max(0.0, alpha[i] + alpha[j] - C_);
                H = std::min(C_, alpha[i] + alpha[j]);
            }
            if (L >= H) return false;

            const double eta = K(i, i) + K(j, j) - 2.0 * K(i, j);
            double aj;
            if (eta > 0.0) {
                aj = alpha[j] + y[j] * (err[i] - err[j]) / eta;
                aj = std::clamp(aj, L, H);
            } else {
                // Flat or concave direction: compare the dual objective at
                // the two clip bounds directly.
                auto dual_gain = [&](double cand) {
                    double dj = cand - alpha[j];
                    double di = -s * dj;
                    double gi = err[i] + y[i] - b; // sum_l alpha_l y_l K(l,i)
                    double gj = err[j] + y[j] - b;
                    return di + dj -
                           0.5 * (di * di * K(i, i) + dj * dj * K(j, j) +
                                  2.0 * di * dj * s * K(i, j)) -
                           di * y[i] * gi - dj * y[j] * gj;
                };
                double gain_l = dual_gain(L), gain_h = dual_gain(H);
                if (gain_l > gain_h + 1e-12)
                    aj = L;
                else if (gain_h > gain_l + 1e-12)
                    aj = H;
                else
                    return false;
            }
            if (aj < 1e-12) aj = 0.0;
            if (aj > C_ - 1e-12) aj = C_;
            if (std::abs(aj - alpha[j]) < 1e-12 * (aj + alpha[j] + 1e-12)) return false;

            double ai = alpha[i] + s * (alpha[j] - aj);
            if (ai < 1e-12) ai = 0.0;
            if (ai > C_ - 1e-12) ai = C_;

            const double di = ai - alpha[i];
            const double dj = aj - alpha[j];
            const double b1 = b - err[i] - y[i] * di * K(i, i) - y[j] * dj * K(i, j);
            const double b2 = b - err[j] - y[i] * di * K(i, j) - y[j] * dj * K(j, j);
            double b_new;
            if (ai > 0.0 && ai < C_)
                b_new = b1;
            else if (aj > 0.0 && aj < C_)
                b_new = b2;
            else
                b_new = (b1 + b2) / 2.0;

            const double db = b_new - b;
            for (std::size_t k = 0; k < n; ++k)
                err[k] += y[i] * di * K(i, k) + y[j] * dj * K(j, k) + db;
            alpha[i] = ai;
            alpha[j] = aj;
            b = b_new;
            ++updates;
            return true;
        };

        auto examine = [&](std::size_t i) -> bool {
            const double r = err[i] * y[i];
            if (!((r < -tol_ && alpha[i] < C_) || (r > tol_ && alpha[i] > 0.0))) return false;
            // Second choice: largest |E_i - E_j|, lowest index on ties.
            std::size_t best_j = n;
            double best_gap = -1.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                double gap = std::abs(err[i] - err[j]);
                if (gap > best_gap) {
                    best_gap = gap;
                    best_j = j;
                }
            }
            if (best_j < n && take_step(i, best_j)) return true;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i && take_step(i, j)) return true;
            return false;
        };

        converged_ = false;
        while (updates < max_updates) {
            std::size_t changed = 0;
            for (std::size_t i = 0; i < n && updates < max_updates; ++i)
                if (examine(i)) ++changed;
            if (changed == 0) {
                converged_ = true;
                break;
            }
        }

        // Final KKT violation: how far any multiplier sits from feasibility.
        max_kkt_violation_ = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double yf = y[i] * (err[i] + y[i]);
            if (alpha[i] < C_) max_kkt_violation_ = std::max(max_kkt_violation_, 1.0 - yf);
            if (alpha[i] > 0.0) max_kkt_violation_ = std::max(max_kkt_violation_, yf - 1.0);
        }
        max_kkt_violation_ = std::max(max_kkt_violation_, 0.0);
        if (!converged_)
            notes_.push_back("smo hit the update cap; final KKT violation " +
                             std::to_string(max_kkt_violation_));

        bias_ = b;
        for (std::size_t i = 0; i < n; ++i) {
            if (alpha[i] <= 0.0) continue;
            support_coef_.push_back(alpha[i] * y[i]);
            support_rows_.insert(support_rows_.end(), X.row(i).begin(), X.row(i).end());
        }
    }

    bool probabilistic() const override { return false; }

    double decision_value(std::span<const double> row) const {
        const std::size_t d = feature_names().size();
        double f = bias_;
        for (std::size_t s = 0; s < support_coef_.size(); ++s) {
            const double* sv = support_rows_.data() + s * d;
            double d2 = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                double diff = sv[j] - row[j];
                d2 += diff * diff;
            }
            f += support_coef_[s] * std::exp(-gamma_ * d2);
        }
        return f;
    }

protected:
    void score_row(std::span<const double> row, std::span<double> out) const override {
        double f = decision_value(row);
        out[0] = -f;
        out[1] = f;
    }

    nlohmann::ordered_json params_json() const override {
        return {{"C", C_},
                {"gamma", gamma_},
                {"bias", bias_},
                {"support_coefficients", support_coef_},
                {"support_vectors", support_rows_},
                {"converged", converged_},
                {"max_kkt_violation", max_kkt_violation_}};
    }

private:
    double C_ = 1.0, tol_ = 1e-3, gamma_ = 0.0, bias_ = 0.0;
    bool converged_ = false;
    double max_kkt_violation_ = 0.0;
    std::vector<double> support_coef_;
    std::vector<double> support_rows_; // flattened, one row per support vector
};

} // namespace

std::unique_ptr<TrainedModel> train_svm(const Matrix& X, const std::vector<int>& y,
                                        const std::vector<std::string>& names,
                                        const ModelSpec& spec) {
    auto prepared = detail::prepare_labels(X, y, names, true, "svm");
    return std::make_unique<SvmModel>(spec, std::move(prepared.classes), names, X,
                                      prepared.indices);
}

} // namespace tabpred
