#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "tabpred/error.hpp"
#include "tabpred/model.hpp"
#include "tabpred/nnet.hpp"
#include "net_common.hpp"

namespace tabpred {
namespace {

class LstmModel final : public TrainedModel {
public:
    LstmModel(ModelSpec spec, std::vector<int> classes, std::vector<std::string> names,
              const Matrix& X, const std::vector<int>& yi) :
        TrainedModel(std::move(spec), std::move(classes), std::move(names)) {
        const Hyperparams& hp = this->spec().hp;
        shape_.seq_len = X.cols;
        shape_.hidden = hp.get_count("hidden");
        shape_.n_classes = this->classes().size();
        if (shape_.hidden == 0) throw ValidationError("lstm: hidden size must be positive");
        const double lr = hp.get("learning_rate");
        if (!(lr > 0.0)) throw ValidationError("lstm: learning_rate must be positive");
        const std::size_t batch_size = hp.get_count("batch_size");
        if (batch_size == 0) throw ValidationError("lstm: batch_size must be positive");
        const std::size_t epochs = hp.get_count("epochs");
        if (epochs == 0) throw ValidationError("lstm: epochs must be positive");

        params_ = lstm_init(shape_, this->spec().seed);
        std::vector<double> grad(params_.size(), 0.0);
        std::vector<std::size_t> all_rows(X.rows);
        for (std::size_t i = 0; i < X.rows; ++i) all_rows[i] = i;

        detail::SgdConfig cfg{X.rows, batch_size, epochs, this->spec().seed, "lstm"};
        iteration_log_ = detail::run_sgd(
            cfg,
            [&](const std::vector<std::size_t>& rows) {
                std::fill(grad.begin(), grad.end(), 0.0);
                lstm_loss_grad(shape_, params_, X, yi, rows, &grad);
                for (std::size_t p = 0; p < params_.size(); ++p) params_[p] -= lr * grad[p];
            },
            [&]() { return lstm_loss_grad(shape_, params_, X, yi, all_rows, nullptr); });
        const std::size_t ran = iteration_log_.size() - 1;
        if (ran < epochs)
            notes_.push_back("stopped early after " + std::to_string(ran) + " of " +
                             std::to_string(epochs) + " epochs");
    }

protected:
    void score_row(std::span<const double> row, std::span<double> out) const override {
        lstm_scores(shape_, params_, row, out);
    }

    nlohmann::ordered_json params_json() const override {
        return {{"hidden", shape_.hidden}, {"weights", params_}};
    }

private:
    LstmShape shape_;
    std::vector<double> params_;
};

} // namespace

std::unique_ptr<TrainedModel> train_lstm(const Matrix& X, const std::vector<int>& y,
                                         const std::vector<std::string>& names,
                                         const ModelSpec& spec) {
    auto prepared = detail::prepare_labels(X, y, names, false, "lstm");
    return std::make_unique<LstmModel>(spec, std::move(prepared.classes), names, X,
                                       prepared.indices);
}

} // namespace tabpred
