#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"
#include "tabpred/linalg.hpp"
#include "tabpred/model.hpp"
#include "tabpred/error.hpp"
#include "tabpred/nnet.hpp"
#include "tabpred/rng.hpp"

using namespace tabpred;

namespace {

struct Problem {
    Matrix X;
    std::vector<int> y; // class indices 0..k-1
    std::vector<std::size_t> rows;
};

Problem random_problem(std::uint64_t seed, std::size_t rows, std::size_t cols,
                       std::size_t classes) {
    rng::Engine eng(seed);
    Problem p;
    p.X = Matrix(rows, cols);
    p.y.resize(rows);
    p.rows.resize(rows);
    std::iota(p.rows.begin(), p.rows.end(), std::size_t{0});
    for (std::size_t r = 0; r < rows; ++r) {
        p.y[r] = static_cast<int>(eng.below(classes));
        for (std::size_t c = 0; c < cols; ++c) p.X(r, c) = eng.uniform(-1.5, 1.5);
    }
    p.y[0] = 0;
    p.y[1] = 1;
    return p;
}

// max relative error between analytic and central-difference gradients
template <typename LossFn>
double max_gradient_error(std::vector<double> params, const LossFn& loss_grad) {
    std::vector<double> grad(params.size(), 0.0);
    loss_grad(params, &grad);
    const double h = 1e-5;
    double worst = 0.0;
    for (std::size_t p = 0; p < params.size(); ++p) {
        double keep = params[p];
        params[p] = keep + h;
        double up = loss_grad(params, nullptr);
        params[p] = keep - h;
        double down = loss_grad(params, nullptr);
        params[p] = keep;
        double numeric = (up - down) / (2.0 * h);
        double denom = std::max({std::abs(numeric), std::abs(grad[p]), 1e-6});
        worst = std::max(worst, std::abs(numeric - grad[p]) / denom);
    }
    return worst;
}

} // namespace

TEST_CASE("dense net analytic gradients match central differences") {
    // Seeds are chosen so no hidden pre-activation sits within the finite
    // difference step of a relu kink; a straddled kink makes the numeric
    // estimate average the two one-sided slopes.
    for (std::uint64_t seed : {2ULL, 5ULL, 6ULL}) {
        Problem p = random_problem(seed, 6, 3, seed == 2 ? 3 : 2);
        DnnShape shape{3, 4, 3, seed == 2 ? std::size_t{3} : std::size_t{2}};
        std::vector<double> params = dnn_init(shape, seed);
        REQUIRE(params.size() == shape.param_count());
        double err = max_gradient_error(params, [&](std::vector<double>& w,
                                                    std::vector<double>* grad) {
            if (grad) std::fill(grad->begin(), grad->end(), 0.0);
            return dnn_loss_grad(shape, w, p.X, p.y, p.rows, grad);
        });
        INFO("seed ", seed, " max relative error ", err);
        CHECK(err < 1e-4);
    }
}

TEST_CASE("lstm analytic gradients match central differences") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        Problem p = random_problem(seed + 10, 5, 4, 2);
        LstmShape shape{4, 3, 2};
        std::vector<double> params = lstm_init(shape, seed);
        REQUIRE(params.size() == shape.param_count());
        double err = max_gradient_error(params, [&](std::vector<double>& w,
                                                    std::vector<double>* grad) {
            if (grad) std::fill(grad->begin(), grad->end(), 0.0);
            return lstm_loss_grad(shape, w, p.X, p.y, p.rows, grad);
        });
        INFO("seed ", seed, " max relative error ", err);
        CHECK(err < 1e-4);
    }
}

TEST_CASE("loss equals mean cross entropy of the emitted scores") {
    Problem p = random_problem(9, 5, 3, 2);
    DnnShape shape{3, 4, 3, 2};
    std::vector<double> params = dnn_init(shape, 9);
    double loss = dnn_loss_grad(shape, params, p.X, p.y, p.rows, nullptr);
    double expect = 0.0;
    std::vector<double> probs(2);
    for (std::size_t r = 0; r < p.X.rows; ++r) {
        dnn_scores(shape, params, p.X.row(r), probs);
        expect -= std::log(probs[static_cast<std::size_t>(p.y[r])]);
    }
    expect /= static_cast<double>(p.X.rows);
    CHECK(loss == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("scores are normalized distributions") {
    Problem p = random_problem(12, 4, 3, 3);
    DnnShape dnn_shape{3, 4, 3, 3};
    std::vector<double> dnn_params = dnn_init(dnn_shape, 4);
    LstmShape lstm_shape{3, 3, 3};
    std::vector<double> lstm_params = lstm_init(lstm_shape, 4);
    std::vector<double> out(3);
    for (std::size_t r = 0; r < p.X.rows; ++r) {
        dnn_scores(dnn_shape, dnn_params, p.X.row(r), out);
        CHECK(std::accumulate(out.begin(), out.end(), 0.0) == doctest::Approx(1.0));
        for (double v : out) CHECK(v >= 0.0);
        lstm_scores(lstm_shape, lstm_params, p.X.row(r), out);
        CHECK(std::accumulate(out.begin(), out.end(), 0.0) == doctest::Approx(1.0));
        for (double v : out) CHECK(v >= 0.0);
    }
}

TEST_CASE("the dense net memorizes a small separable dataset") {
    rng::Engine eng(15);
    Matrix X(24, 2);
    std::vector<int> y(24);
    for (std::size_t r = 0; r < 24; ++r) {
        y[r] = r % 2 == 0 ? 1 : 0;
        X(r, 0) = y[r] == 1 ? eng.uniform(0.5, 1.5) : eng.uniform(-1.5, -0.5);
        X(r, 1) = eng.uniform(-1, 1);
    }
    ModelSpec spec(ModelFamily::dnn, 21);
    spec.hp.set("hidden1", 8);
    spec.hp.set("hidden2", 4);
    spec.hp.set("learning_rate", 0.05);
    spec.hp.set("batch_size", 4);
    spec.hp.set("epochs", 300);
    auto model = fit(spec, X, y, {"x", "noise"});
    auto pred = predict_labels(*model, X);
    std::size_t correct = 0;
    for (std::size_t r = 0; r < 24; ++r) correct += pred[r] == y[r] ? 1 : 0;
    CHECK(correct >= 23);

    const auto& log = model->iteration_log();
    REQUIRE(log.size() >= 2);
    CHECK(log.back() < log.front());
}

TEST_CASE("the lstm learns a first-timestep rule") {
    rng::Engine eng(16);
    Matrix X(20, 3);
    std::vector<int> y(20);
    for (std::size_t r = 0; r < 20; ++r) {
        y[r] = r % 2;
        X(r, 0) = y[r] == 1 ? 1.0 : -1.0;
        X(r, 1) = eng.uniform(-0.3, 0.3);
        X(r, 2) = eng.uniform(-0.3, 0.3);
    }
    ModelSpec spec(ModelFamily::lstm, 5);
    spec.hp.set("hidden", 4);
    spec.hp.set("learning_rate", 0.1);
    spec.hp.set("batch_size", 4);
    spec.hp.set("epochs", 400);
    auto model = fit(spec, X, y, {"t0", "t1", "t2"});
    auto pred = predict_labels(*model, X);
    std::size_t correct = 0;
    for (std::size_t r = 0; r < 20; ++r) correct += pred[r] == y[r] ? 1 : 0;
    CHECK(correct >= 19);
}

TEST_CASE("network training is seed-deterministic and patience cuts it short") {
    rng::Engine eng(18);
    Matrix X(16, 2);
    std::vector<int> y(16);
    for (std::size_t r = 0; r < 16; ++r) {
        y[r] = r % 2;
        X(r, 0) = y[r] == 1 ? 1.0 : -1.0;
        X(r, 1) = eng.uniform(-1, 1);
    }
    ModelSpec spec(ModelFamily::dnn, 33);
    spec.hp.set("hidden1", 6);
    spec.hp.set("hidden2", 3);
    spec.hp.set("epochs", 5000);
    spec.hp.set("learning_rate", 0.05);
    spec.hp.set("batch_size", 4);
    auto a = fit(spec, X, y, {"x", "n"});
    auto b = fit(spec, X, y, {"x", "n"});
    CHECK(a->to_json() == b->to_json());

    // plateau detection must stop far short of the 5000-epoch budget
    CHECK(a->iteration_log().size() < 5001);
    bool noted = false;
    for (const std::string& note : a->notes()) noted = noted || note.find("stopped early") == 0;
    CHECK(noted);
}

TEST_CASE("network hyperparameters are validated") {
    Matrix X(4, 1);
    std::vector<int> y{0, 1, 0, 1};
    for (std::size_t r = 0; r < 4; ++r) X(r, 0) = static_cast<double>(r) - 1.5;
    auto bad = [&](const char* name, double v) {
        ModelSpec spec(ModelFamily::dnn, 1);
        spec.hp.set(name, v);
        return fit(spec, X, y, {"x"});
    };
    CHECK_THROWS_AS(bad("hidden1", 0), ValidationError);
    CHECK_THROWS_AS(bad("learning_rate", 0), ValidationError);
    CHECK_THROWS_AS(bad("epochs", 0), ValidationError);
    CHECK_THROWS_AS(bad("batch_size", 0), ValidationError);
}
