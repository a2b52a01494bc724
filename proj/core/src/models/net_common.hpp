#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tabpred/error.hpp"
#include "tabpred/rng.hpp"

namespace tabpred::detail {

struct SgdConfig {
    std::size_t n_rows = 0;
    std::size_t batch_size = 1;
    std::size_t max_epochs = 1;
    std::uint64_t seed = 0;
    const char* family = "";
};

// Epoch-shuffled mini-batch SGD shared by the two network trainers.
// step(rows) applies one gradient update from those rows; full_loss() is the
// current loss over the whole training set. Stops at max_epochs, or earlier
// once the loss has gone 25 consecutive epochs without improving on the best
// value seen by at least 1e-6. The tolerance is absolute: on separable data
// the loss decays geometrically toward zero, so a relative test would never
// level off. Returns the loss trace: the initial loss followed by one entry
// per completed epoch. A non-finite loss aborts training.
template <typename Step, typename FullLoss>
std::vector<double> run_sgd(const SgdConfig& cfg, Step&& step, FullLoss&& full_loss) {
    constexpr double kMinGain = 1e-6;
    constexpr std::size_t kPatience = 25;

    std::vector<double> trace;
    double best = full_loss();
    if (!std::isfinite(best))
        throw Error(std::string(cfg.family) + ": initial loss is not finite");
    trace.push_back(best);

    std::vector<std::size_t> order(cfg.n_rows);
    for (std::size_t i = 0; i < cfg.n_rows; ++i) order[i] = i;
    std::vector<std::size_t> batch;

    std::size_t stall = 0;
    for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        rng::Engine eng(rng::mix(cfg.seed, rng::hash_string("epoch-order"), epoch));
        eng.shuffle(order);
        for (std::size_t pos = 0; pos < cfg.n_rows; pos += cfg.batch_size) {
            std::size_t end = std::min(cfg.n_rows, pos + cfg.batch_size);
            batch.assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
            step(batch);
        }
        double loss = full_loss();
        if (!std::isfinite(loss))
            throw Error(std::string(cfg.family) + ": loss diverged at epoch " +
                        std::to_string(epoch + 1));
        trace.push_back(loss);
        if (best - loss > kMinGain)
            stall = 0;
        else
            ++stall;
        best = std::min(best, loss);
        if (stall >= kPatience) break;
    }
    return trace;
}

} // namespace tabpred::detail
