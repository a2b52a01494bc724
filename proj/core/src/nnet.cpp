#include "tabpred/nnet.hpp"

#include <algorithm>
#include <cmath>

#include "tabpred/error.hpp"
#include "tabpred/rng.hpp"

namespace tabpred {
namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Stable softmax + cross-entropy; returns -log p[target], fills probs.
double softmax_loss(std::span<const double> logits, int target, std::span<double> probs) {
    double m = logits[0];
    for (double v : logits) m = std::max(m, v);
    double sum = 0.0;
    for (std::size_t c = 0; c < logits.size(); ++c) {
        probs[c] = std::exp(logits[c] - m);
        sum += probs[c];
    }
    for (std::size_t c = 0; c < logits.size(); ++c) probs[c] /= sum;
    return std::log(sum) - (logits[static_cast<std::size_t>(target)] - m);
}

void glorot_fill(std::span<double> w, std::size_t fan_in, std::size_t fan_out, rng::Engine& eng) {
    double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& v : w) v = eng.uniform(-limit, limit);
}

struct DnnOffsets {
    std::size_t W1, b1, W2, b2, W3, b3;
    explicit DnnOffsets(const DnnShape& s) {
        W1 = 0;
        b1 = W1 + s.h1 * s.in;
        W2 = b1 + s.h1;
        b2 = W2 + s.h2 * s.h1;
        W3 = b2 + s.h2;
        b3 = W3 + s.n_classes * s.h2;
    }
};

struct DnnWork {
    std::vector<double> z1, a1, z2, a2, z3, probs;
    std::vector<double> dz1, dz2, dz3;
    explicit DnnWork(const DnnShape& s)
        : z1(s.h1), a1(s.h1), z2(s.h2), a2(s.h2), z3(s.n_classes), probs(s.n_classes),
          dz1(s.h1), dz2(s.h2), dz3(s.n_classes) {}
};

void dnn_forward(const DnnShape& s, const DnnOffsets& o, const double* p,
                 std::span<const double> x, DnnWork& w) {
    for (std::size_t j = 0; j < s.h1; ++j) {
        double z = p[o.b1 + j];
        const double* row = p + o.W1 + j * s.in;
        for (std::size_t i = 0; i < s.in; ++i) z += row[i] * x[i];
        w.z1[j] = z;
        w.a1[j] = z > 0.0 ? z : 0.0;
    }
    for (std::size_t j = 0; j < s.h2; ++j) {
        double z = p[o.b2 + j];
        const double* row = p + o.W2 + j * s.h1;
        for (std::size_t i = 0; i < s.h1; ++i) z += row[i] * w.a1[i];
        w.z2[j] = z;
        w.a2[j] = z > 0.0 ? z : 0.0;
    }
    for (std::size_t c = 0; c < s.n_classes; ++c) {
        double z = p[o.b3 + c];
        const double* row = p + o.W3 + c * s.h2;
        for (std::size_t i = 0; i < s.h2; ++i) z += row[i] * w.a2[i];
        w.z3[c] = z;
    }
}

struct LstmOffsets {
    std::size_t Wx, Wh, b, Wout, bout;
    explicit LstmOffsets(const LstmShape& s) {
        Wx = 0;
        Wh = Wx + 4 * s.hidden;
        b = Wh + 4 * s.hidden * s.hidden;
        Wout = b + 4 * s.hidden;
        bout = Wout + s.n_classes * s.hidden;
    }
};

} // namespace

std::vector<double> dnn_init(const DnnShape& shape, std::uint64_t seed) {
    if (shape.in == 0 || shape.h1 == 0 || shape.h2 == 0 || shape.n_classes == 0)
        throw Error("dnn_init: every layer needs at least one unit");
    std::vector<double> params(shape.param_count(), 0.0);
    DnnOffsets o(shape);
    rng::Engine e1(rng::mix(seed, 1));
    glorot_fill({params.data() + o.W1, shape.h1 * shape.in}, shape.in, shape.h1, e1);
    rng::Engine e2(rng::mix(seed, 2));
    glorot_fill({params.data() + o.W2, shape.h2 * shape.h1}, shape.h1, shape.h2, e2);
    rng::Engine e3(rng::mix(seed, 3));
    glorot_fill({params.data() + o.W3, shape.n_classes * shape.h2}, shape.h2, shape.n_classes, e3);
    return params;
}

double dnn_loss_grad(const DnnShape& shape, const std::vector<double>& params, const Matrix& X,
                     const std::vector<int>& y, const std::vector<std::size_t>& rows,
                     std::vector<double>* grad) {
    if (params.size() != shape.param_count()) throw Error("dnn: parameter vector size mismatch");
    if (X.cols != shape.in) throw Error("dnn: feature count mismatch");
    if (rows.empty()) throw Error("dnn: empty batch");
    if (grad && grad->size() != params.size()) throw Error("dnn: gradient size mismatch");

    const DnnOffsets o(shape);
    const double* p = params.data();
    double* g = grad ? grad->data() : nullptr;
    DnnWork w(shape);
    const double inv_b = 1.0 / static_cast<double>(rows.size());

    double loss = 0.0;
    for (std::size_t r : rows) {
        std::span<const double> x = X.row(r);
        dnn_forward(shape, o, p, x, w);
        loss += softmax_loss(w.z3, y[r], w.probs) * inv_b;
        if (!g) continue;

        for (std::size_t c = 0; c < shape.n_classes; ++c)
            w.dz3[c] = (w.probs[c] - (static_cast<int>(c) == y[r] ? 1.0 : 0.0)) * inv_b;
        for (std::size_t c = 0; c < shape.n_classes; ++c) {
            double* grow = g + o.W3 + c * shape.h2;
            for (std::size_t i = 0; i < shape.h2; ++i) grow[i] += w.dz3[c] * w.a2[i];
            g[o.b3 + c] += w.dz3[c];
        }
        for (std::size_t j = 0; j < shape.h2; ++j) {
            double da = 0.0;
            for (std::size_t c = 0; c < shape.n_classes; ++c)
                da += p[o.W3 + c * shape.h2 + j] * w.dz3[c];
            w.dz2[j] = w.z2[j] > 0.0 ? da : 0.0;
        }
        for (std::size_t j = 0; j < shape.h2; ++j) {
            double* grow = g + o.W2 + j * shape.h1;
            for (std::size_t i = 0; i < shape.h1; ++i) grow[i] += w.dz2[j] * w.a1[i];
            g[o.b2 + j] += w.dz2[j];
        }
        for (std::size_t j = 0; j < shape.h1; ++j) {
            double da = 0.0;
            for (std::size_t c = 0; c < shape.h2; ++c) da += p[o.W2 + c * shape.h1 + j] * w.dz2[c];
            w.dz1[j] = w.z1[j] > 0.0 ? da : 0.0;
        }
        for (std::size_t j = 0; j < shape.h1; ++j) {
            double* grow = g + o.W1 + j * shape.in;
            for (std::size_t i = 0; i < shape.in; ++i) grow[i] += w.dz1[j] * x[i];
            g[o.b1 + j] += w.dz1[j];
        }
    }
    return loss;
}

void dnn_scores(const DnnShape& shape, const std::vector<double>& params,
                std::span<const double> row, std::span<double> out) {
    DnnOffsets o(shape);
    DnnWork w(shape);
    dnn_forward(shape, o, params.data(), row, w);
    softmax_loss(w.z3, 0, out);
}

std::vector<double> lstm_init(const LstmShape& shape, std::uint64_t seed) {
    if (shape.seq_len == 0 || shape.hidden == 0 || shape.n_classes == 0)
        throw Error("lstm_init: degenerate shape");
    std::vector<double> params(shape.param_count(), 0.0);
    LstmOffsets o(shape);
    const std::size_t H = shape.hidden;
    rng::Engine e1(rng::mix(seed, 1));
    glorot_fill({params.data() + o.Wx, 4 * H}, 1, H, e1);
    rng::Engine e2(rng::mix(seed, 2));
    glorot_fill({params.data() + o.Wh, 4 * H * H}, H, H, e2);
    rng::Engine e3(rng::mix(seed, 3));
    glorot_fill({params.data() + o.Wout, shape.n_classes * H}, H, shape.n_classes, e3);
    return params;
}

double lstm_loss_grad(const LstmShape& shape, const std::vector<double>& params, const Matrix& X,
                      const std::vector<int>& y, const std::vector<std::size_t>& rows,
                      std::vector<double>* grad) {
    if (params.size() != shape.param_count()) throw Error("lstm: parameter vector size mismatch");
    if (X.cols != shape.seq_len) throw Error("lstm: sequence length mismatch");
    if (rows.empty()) throw Error("lstm: empty batch");
    if (grad && grad->size() != params.size()) throw Error("lstm: gradient size mismatch");

    const LstmOffsets o(shape);
    const std::size_t H = shape.hidden;
    const std::size_t T = shape.seq_len;
    const std::size_t K = shape.n_classes;
    const double* p = params.data();
    double* g = grad ? grad->data() : nullptr;
    const double inv_b = 1.0 / static_cast<double>(rows.size());

    // Per-step activations kept for backpropagation through time.
    std::vector<double> gi(T * H), gf(T * H), gg(T * H), go(T * H);
    std::vector<double> cell(T * H), tanh_c(T * H), hidden((T + 1) * H, 0.0);
    std::vector<double> logits(K), probs(K), dz(K);
    std::vector<double> dh(H), dc(H), dpre(4 * H), dh_prev(H);

    double loss = 0.0;
    for (std::size_t r : rows) {
        std::span<const double> x = X.row(r);
        std::fill(hidden.begin(), hidden.begin() + static_cast<std::ptrdiff_t>(H), 0.0);

        for (std::size_t t = 0; t < T; ++t) {
            const double* h_prev = hidden.data() + t * H;
            double* h_now = hidden.data() + (t + 1) * H;
            for (std::size_t u = 0; u < H; ++u) {
                double pre[4];
                for (std::size_t gate = 0; gate < 4; ++gate) {
                    std::size_t row_idx = gate * H + u;
                    double z = p[o.b + row_idx] + p[o.Wx + row_idx] * x[t];
                    const double* wh = p + o.Wh + row_idx * H;
                    for (std::size_t k = 0; k < H; ++k) z += wh[k] * h_prev[k];
                    pre[gate] = z;
                }
                double iv = sigmoid(pre[0]);
                double fv = sigmoid(pre[1]);
                double gv = std::tanh(pre[2]);
                double ov = sigmoid(pre[3]);
                double c_prev = t == 0 ? 0.0 : cell[(t - 1) * H + u];
                double cv = fv * c_prev + iv * gv;
                gi[t * H + u] = iv;
                gf[t * H + u] = fv;
                gg[t * H + u] = gv;
                go[t * H + u] = ov;
                cell[t * H + u] = cv;
                double tc = std::tanh(cv);
                tanh_c[t * H + u] = tc;
                h_now[u] = ov * tc;
            }
        }

        const double* h_final = hidden.data() + T * H;
        for (std::size_t c = 0; c < K; ++c) {
            double z = p[o.bout + c];
            const double* row_w = p + o.Wout + c * H;
            for (std::size_t k = 0; k < H; ++k) z += row_w[k] * h_final[k];
            logits[c] = z;
        }
        loss += softmax_loss(logits, y[r], probs) * inv_b;
        if (!g) continue;

        for (std::size_t c = 0; c < K; ++c)
            dz[c] = (probs[c] - (static_cast<int>(c) == y[r] ? 1.0 : 0.0)) * inv_b;
        for (std::size_t c = 0; c < K; ++c) {
            double* grow = g + o.Wout + c * H;
            for (std::size_t k = 0; k < H; ++k) grow[k] += dz[c] * h_final[k];
            g[o.bout + c] += dz[c];
        }
        for (std::size_t k = 0; k < H; ++k) {
            double v = 0.0;
            for (std::size_t c = 0; c < K; ++c) v += p[o.Wout + c * H + k] * dz[c];
            dh[k] = v;
        }
        std::fill(dc.begin(), dc.end(), 0.0);

        for (std::size_t t = T; t-- > 0;) {
            const double* h_prev = hidden.data() + t * H;
            for (std::size_t u = 0; u < H; ++u) {
                double iv = gi[t * H + u], fv = gf[t * H + u];
                double gv = gg[t * H + u], ov = go[t * H + u];
                double tc = tanh_c[t * H + u];
                double c_prev = t == 0 ? 0.0 : cell[(t - 1) * H + u];

                double dcv = dc[u] + dh[u] * ov * (1.0 - tc * tc);
                double dov = dh[u] * tc;
                dpre[0 * H + u] = dcv * gv * iv * (1.0 - iv);
                dpre[1 * H + u] = dcv * c_prev * fv * (1.0 - fv);
                dpre[2 * H + u] = dcv * iv * (1.0 - gv * gv);
                dpre[3 * H + u] = dov * ov * (1.0 - ov);
                dc[u] = dcv * fv;
            }
            std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
            for (std::size_t gate = 0; gate < 4; ++gate) {
                for (std::size_t u = 0; u < H; ++u) {
                    std::size_t row_idx = gate * H + u;
                    double d = dpre[row_idx];
                    if (d == 0.0) continue;
                    g[o.Wx + row_idx] += d * x[t];
                    g[o.b + row_idx] += d;
                    double* grow = g + o.Wh + row_idx * H;
                    const double* wh = p + o.Wh + row_idx * H;
                    for (std::size_t k = 0; k < H; ++k) {
                        grow[k] += d * h_prev[k];
                        dh_prev[k] += wh[k] * d;
                    }
                }
            }
            std::swap(dh, dh_prev);
        }
    }
    return loss;
}

void lstm_scores(const LstmShape& shape, const std::vector<double>& params,
                 std::span<const double> row, std::span<double> out) {
    const LstmOffsets o(shape);
    const std::size_t H = shape.hidden;
    const double* p = params.data();
    std::vector<double> h(H, 0.0), c(H, 0.0), h_next(H);
    for (std::size_t t = 0; t < shape.seq_len; ++t) {
        for (std::size_t u = 0; u < H; ++u) {
            double pre[4];
            for (std::size_t gate = 0; gate < 4; ++gate) {
                std::size_t row_idx = gate * H + u;
                double z = p[o.b + row_idx] + p[o.Wx + row_idx] * row[t];
                const double* wh = p + o.Wh + row_idx * H;
                for (std::size_t k = 0; k < H; ++k) z += wh[k] * h[k];
                pre[gate] = z;
            }
            double iv = sigmoid(pre[0]);
            double fv = sigmoid(pre[1]);
            double gv = std::tanh(pre[2]);
            double ov = sigmoid(pre[3]);
            c[u] = fv * c[u] + iv * gv;
            h_next[u] = ov * std::tanh(c[u]);
        }
        std::swap(h, h_next);
    }
    std::vector<double> logits(shape.n_classes);
    for (std::size_t cls = 0; cls < shape.n_classes; ++cls) {
        double z = p[o.bout + cls];
        const double* row_w = p + o.Wout + cls * H;
        for (std::size_t k = 0; k < H; ++k) z += row_w[k] * h[k];
        logits[cls] = z;
    }
    softmax_loss(logits, 0, out);
}

} // namespace tabpred
