#include <vector>

#include <benchmark/benchmark.h>

#include "jobrec/classifier.hpp"
#include "jobrec/matrix.hpp"
#include "jobrec/rng.hpp"

namespace {

struct Fixture {
    jobrec::FeatureMatrix x;
    std::vector<int> y;
};

// sparse binary rows where class 1 leans on the low feature indices
Fixture sparse_fixture(size_t rows, size_t cols) {
    jobrec::Rng rng(37);
    jobrec::SparseBinaryMatrix m(cols);
    std::vector<int> y(rows);
    for (size_t i = 0; i < rows; ++i) {
        y[i] = i % 2 == 0 ? 1 : 0;
        std::vector<uint32_t> idx;
        for (int t = 0; t < 30; ++t) {
            size_t base = y[i] == 1 ? 0 : cols / 2;
            idx.push_back(static_cast<uint32_t>(base + rng.below(cols / 2)));
        }
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        m.add_row(idx);
    }
    return {jobrec::FeatureMatrix(std::move(m)), std::move(y)};
}

void bench_train(benchmark::State& state, jobrec::Algorithm algo) {
    auto fixture = sparse_fixture(400, 2000);
    auto hp = jobrec::default_hyperparams(algo);
    for (auto _ : state) {
        auto model = jobrec::train(fixture.x, fixture.y, hp);
        benchmark::DoNotOptimize(model);
    }
}

void BM_TrainNaiveBayes(benchmark::State& state) {
    bench_train(state, jobrec::Algorithm::NaiveBayes);
}
BENCHMARK(BM_TrainNaiveBayes)->Unit(benchmark::kMillisecond);

void BM_TrainLinearSvm(benchmark::State& state) {
    bench_train(state, jobrec::Algorithm::LinearSVM);
}
BENCHMARK(BM_TrainLinearSvm)->Unit(benchmark::kMillisecond);

void BM_TrainLogisticRegression(benchmark::State& state) {
    bench_train(state, jobrec::Algorithm::LogReg);
}
BENCHMARK(BM_TrainLogisticRegression)->Unit(benchmark::kMillisecond);

void BM_TrainDecisionTree(benchmark::State& state) {
    bench_train(state, jobrec::Algorithm::DecisionTree);
}
BENCHMARK(BM_TrainDecisionTree)->Unit(benchmark::kMillisecond);

void BM_TrainKernelSvm(benchmark::State& state) {
    bench_train(state, jobrec::Algorithm::KernelSvmC);
}
BENCHMARK(BM_TrainKernelSvm)->Unit(benchmark::kMillisecond);

void BM_PredictForest(benchmark::State& state) {
    auto fixture = sparse_fixture(400, 2000);
    auto hp = jobrec::default_hyperparams(jobrec::Algorithm::RandomForest);
    hp.n_trees = 20;
    auto model = jobrec::train(fixture.x, fixture.y, hp);
    for (auto _ : state) {
        auto pred = jobrec::predict(model, fixture.x);
        benchmark::DoNotOptimize(pred);
    }
}
BENCHMARK(BM_PredictForest)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
