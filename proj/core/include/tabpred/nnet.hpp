#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tabpred/linalg.hpp"

namespace tabpred {

// Fully connected net: input -> h1 ReLU -> h2 ReLU -> softmax over classes.
// Parameters live in one flat vector (layout in nnet.cpp) so optimizers and
// finite-difference checks can treat them uniformly.
struct DnnShape {
    std::size_t in = 0;
    std::size_t h1 = 64;
    std::size_t h2 = 32;
    std::size_t n_classes = 0;

    std::size_t param_count() const {
        return h1 * in + h1 + h2 * h1 + h2 + n_classes * h2 + n_classes;
    }
};

// Glorot-uniform weights, zero biases.
std::vector<double> dnn_init(const DnnShape& shape, std::uint64_t seed);

// Mean cross-entropy over `rows`; accumulates into *grad when non-null
// (grad must be zeroed by the caller and sized like params).
double dnn_loss_grad(const DnnShape& shape, const std::vector<double>& params, const Matrix& X,
                     const std::vector<int>& y, const std::vector<std::size_t>& rows,
                     std::vector<double>* grad);

// Softmax class probabilities for one row.
void dnn_scores(const DnnShape& shape, const std::vector<double>& params,
                std::span<const double> row, std::span<double> out);

// LSTM over the feature sequence: each of the `seq_len` features is one
// scalar timestep; the final hidden state feeds a dense softmax layer.
// Gate blocks are ordered [input, forget, candidate, output].
struct LstmShape {
    std::size_t seq_len = 0;
    std::size_t hidden = 64;
    std::size_t n_classes = 0;

    std::size_t param_count() const {
        return 4 * hidden           // input weights (1-dim steps)
               + 4 * hidden * hidden // recurrent weights
               + 4 * hidden          // gate biases
               + n_classes * hidden + n_classes;
    }
};

std::vector<double> lstm_init(const LstmShape& shape, std::uint64_t seed);

double lstm_loss_grad(const LstmShape& shape, const std::vector<double>& params, const Matrix& X,
                      const std::vector<int>& y, const std::vector<std::size_t>& rows,
                      std::vector<double>* grad);

void lstm_scores(const LstmShape& shape, const std::vector<double>& params,
                 std::span<const double> row, std::span<double> out);

} // namespace tabpred
