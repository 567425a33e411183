#include <vector>

#include <benchmark/benchmark.h>

#include "jobrec/matrix.hpp"
#include "jobrec/rng.hpp"
#include "jobrec/svd.hpp"

namespace {

// sparse document matrix with roughly 40 stored terms per row
jobrec::FeatureMatrix synthetic_sparse(size_t rows, size_t cols) {
    jobrec::Rng rng(23);
    jobrec::SparseBinaryMatrix m(cols);
    for (size_t i = 0; i < rows; ++i) {
        std::vector<uint32_t> idx;
        for (int t = 0; t < 40; ++t) idx.push_back(static_cast<uint32_t>(rng.below(cols)));
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        m.add_row(idx);
    }
    return jobrec::FeatureMatrix(std::move(m));
}

void BM_TruncatedSvdExact(benchmark::State& state) {
    auto a = synthetic_sparse(400, 200);
    for (auto _ : state) {
        auto svd = jobrec::truncated_svd(a, static_cast<int>(state.range(0)), 42);
        benchmark::DoNotOptimize(svd);
    }
}
BENCHMARK(BM_TruncatedSvdExact)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_TruncatedSvdRandomized(benchmark::State& state) {
    auto a = synthetic_sparse(500, 8000);
    for (auto _ : state) {
        auto svd = jobrec::truncated_svd(a, static_cast<int>(state.range(0)), 42);
        benchmark::DoNotOptimize(svd);
    }
}
BENCHMARK(BM_TruncatedSvdRandomized)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_Project(benchmark::State& state) {
    auto a = synthetic_sparse(500, 8000);
    auto svd = jobrec::truncated_svd(a, 50, 42);
    for (auto _ : state) {
        auto reduced = jobrec::project(a, svd);
        benchmark::DoNotOptimize(reduced);
    }
}
BENCHMARK(BM_Project)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
