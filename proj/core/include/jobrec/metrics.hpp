#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace jobrec {

struct ConfusionMatrix {
    uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
    uint64_t total() const { return tp + fp + tn + fn; }
};

// positional tally, positive class = 1; lengths must match
ConfusionMatrix confusion(std::span<const int> pred, std::span<const int> truth);

struct MetricValue {
    double value = 0.0;
    bool undefined = false;  // denominator was 0; value reported as 0
};

MetricValue precision(const ConfusionMatrix& cm);
MetricValue recall(const ConfusionMatrix& cm);
double accuracy(const ConfusionMatrix& cm);

// arithmetic mean; empty input is an error
double macro_average(std::span<const double> values);

// wall-clock seconds around the fit call, monotonic clock
template <class Fit>
auto time_fit(Fit&& fit) {
    auto t0 = std::chrono::steady_clock::now();
    auto result = fit();
    auto t1 = std::chrono::steady_clock::now();
    double seconds = std::chrono::duration<double>(t1 - t0).count();
    return std::pair{std::move(result), seconds};
}

// Ranking metrics over real-valued scores: the n highest-scoring examples
// are predicted positive (ties broken by lower index first).
double precision_at_n(std::span<const double> scores, std::span<const int> truth, size_t n);
double recall_at_n(std::span<const double> scores, std::span<const int> truth, size_t n);

}  // namespace jobrec
