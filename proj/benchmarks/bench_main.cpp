// Microbenchmarks for the hot paths: imputation, forest-based feature
// ranking, ROC construction, resampling, and a full cross-validation pass.
// Sizes mirror a mid-sized clinical table (hundreds of rows, tens of
// columns) so the numbers track what a `run` invocation actually spends.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "tabpred/cross_validation.hpp"
#include "tabpred/importance.hpp"
#include "tabpred/impute.hpp"
#include "tabpred/metrics.hpp"
#include "tabpred/model.hpp"
#include "tabpred/rebalance.hpp"
#include "tabpred/rng.hpp"
#include "tabpred/synth.hpp"

namespace {

using namespace tabpred;

DataTable sparse_table(std::size_t n_rows, double missing_fraction) {
    SynthConfig cfg;
    cfg.n_rows = n_rows;
    cfg.informative = 6;
    cfg.noise = 4;
    cfg.booleans = 2;
    cfg.missing_fraction = missing_fraction;
    cfg.seed = 71;
    return synth_table(cfg);
}

DataTable dense_table(std::size_t n_rows, double positive_fraction) {
    SynthConfig cfg;
    cfg.n_rows = n_rows;
    cfg.informative = 5;
    cfg.noise = 5;
    cfg.booleans = 2;
    cfg.positive_fraction = positive_fraction;
    cfg.seed = 72;
    return synth_table(cfg);
}

void BM_KnnImpute(benchmark::State& state) {
    const DataTable base = sparse_table(static_cast<std::size_t>(state.range(0)), 0.2);
    for (auto _ : state) {
        DataTable table = base;
        ImputeStats stats = knn_impute(table);
        benchmark::DoNotOptimize(stats);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(base.missing_count()));
}
BENCHMARK(BM_KnnImpute)->Arg(200)->Arg(500);

void BM_ImportanceExtraTrees(benchmark::State& state) {
    const DataTable table = dense_table(static_cast<std::size_t>(state.range(0)), 0.4);
    for (auto _ : state) {
        ImportanceVector v = impurity_importance(table, ImportanceMethod::extra_trees, 100, 9);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_ImportanceExtraTrees)->Arg(200)->Arg(500);

void BM_ImportanceRandomForest(benchmark::State& state) {
    const DataTable table = dense_table(static_cast<std::size_t>(state.range(0)), 0.4);
    for (auto _ : state) {
        ImportanceVector v = impurity_importance(table, ImportanceMethod::random_forest, 100, 9);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_ImportanceRandomForest)->Arg(200)->Arg(500);

void BM_RocCurve(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    rng::Engine eng(15);
    std::vector<double> scores(n);
    std::vector<int> truth(n);
    for (std::size_t i = 0; i < n; ++i) {
        truth[i] = eng.uniform() < 0.3 ? 1 : 0;
        scores[i] = eng.uniform() * 0.7 + 0.3 * truth[i];
    }
    for (auto _ : state) {
        auto points = roc_curve(scores, truth, 1);
        benchmark::DoNotOptimize(auc(points));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n));
}
BENCHMARK(BM_RocCurve)->Arg(1000)->Arg(100000);

void BM_Oversample(benchmark::State& state) {
    const DataTable table = dense_table(static_cast<std::size_t>(state.range(0)), 0.15);
    const ResamplePlan plan{ResampleMode::oversample, 3};
    for (auto _ : state) {
        DataTable out = resample(table, plan);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_Oversample)->Arg(1000);

void BM_CrossValidate(benchmark::State& state, ModelFamily family) {
    const DataTable table = dense_table(600, 0.25);
    std::vector<std::string> features;
    for (const FeatureSchema::Column& col : table.schema().columns())
        features.push_back(col.name);
    ModelSpec spec(family, 21);
    const ResamplePlan plan{ResampleMode::undersample, 4};
    CvOptions options;
    options.seed = 13;
    for (auto _ : state) {
        EvalReport report = cross_validate(table, spec, plan, features, options);
        benchmark::DoNotOptimize(report);
    }
}
BENCHMARK_CAPTURE(BM_CrossValidate, gnb, ModelFamily::gnb);
BENCHMARK_CAPTURE(BM_CrossValidate, logistic, ModelFamily::logistic);
BENCHMARK_CAPTURE(BM_CrossValidate, rf, ModelFamily::rf);

} // namespace

BENCHMARK_MAIN();
