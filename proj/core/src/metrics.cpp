#include "jobrec/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "jobrec/error.hpp"

namespace jobrec {

ConfusionMatrix confusion(std::span<const int> pred, std::span<const int> truth) {
    if (pred.size() != truth.size())
        data_error("confusion: prediction and truth lengths differ");
    if (pred.empty()) data_error("confusion: empty label vectors");
    ConfusionMatrix cm;
    for (size_t i = 0; i < pred.size(); ++i) {
        if (truth[i] == 1) {
            if (pred[i] == 1) ++cm.tp;
            else ++cm.fn;
        } else {
            if (pred[i] == 1) ++cm.fp;
            else ++cm.tn;
        }
    }
    return cm;
}

MetricValue precision(const ConfusionMatrix& cm) {
    uint64_t denom = cm.tp + cm.fp;
    if (denom == 0) return {0.0, true};
    return {static_cast<double>(cm.tp) / static_cast<double>(denom), false};
}

MetricValue recall(const ConfusionMatrix& cm) {
    uint64_t denom = cm.tp + cm.fn;
    if (denom == 0) return {0.0, true};
    return {static_cast<double>(cm.tp) / static_cast<double>(denom), false};
}

double accuracy(const ConfusionMatrix& cm) {
    uint64_t total = cm.total();
    if (total == 0) return 0.0;
    return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(total);
}

double macro_average(std::span<const double> values) {
    if (values.empty()) data_error("macro_average: empty value list");
    double sum = std::accumulate(values.begin(), values.end(), 0.0);
    return sum / static_cast<double>(values.size());
}

namespace {

std::vector<size_t> top_n_indices(std::span<const double> scores, size_t n) {
    std::vector<size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return scores[a] > scores[b]; });
    order.resize(std::min(n, order.size()));
    return order;
}

}  // namespace

double precision_at_n(std::span<const double> scores, std::span<const int> truth, size_t n) {
    if (scores.size() != truth.size())
        data_error("precision_at_n: score and truth lengths differ");
    if (n == 0) return 0.0;
    auto top = top_n_indices(scores, n);
    size_t hits = 0;
    for (size_t i : top) hits += truth[i] == 1;
    return static_cast<double>(hits) / static_cast<double>(top.size());
}

double recall_at_n(std::span<const double> scores, std::span<const int> truth, size_t n) {
    if (scores.size() != truth.size())
        data_error("recall_at_n: score and truth lengths differ");
    size_t positives = 0;
    for (int t : truth) positives += t == 1;
    if (positives == 0) return 0.0;
    auto top = top_n_indices(scores, n);
    size_t hits = 0;
    for (size_t i : top) hits += truth[i] == 1;
    return static_cast<double>(hits) / static_cast<double>(positives);
}

}  // namespace jobrec
