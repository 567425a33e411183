#include <algorithm>
#include <cmath>
#include <numeric>

#include "classifier_internal.hpp"
#include "jobrec/classifier.hpp"
#include "jobrec/rng.hpp"

namespace jobrec {

double sigmoid(double t) {
    // branch on sign so exp never overflows
    if (t >= 0.0) {
        return 1.0 / (1.0 + std::exp(-t));
    }
    double e = std::exp(t);
    return e / (1.0 + e);
}

double linear_score(std::span<const double> w, double w0, std::span<const double> x) {
    if (w.size() != x.size()) data_error("linear_score: weight and feature lengths differ");
    double s = w0;
    for (size_t i = 0; i < w.size(); ++i) s += w[i] * x[i];
    return s;
}

Model train_logistic_regression(const FeatureMatrix& x, std::span<const int> y,
                                const Hyperparams& hp) {
    detail::check_labels(x, y);
    detail::FitTimer timer;

    size_t n = x.rows(), dim = x.cols();
    LinearModel lm;
    lm.w.assign(dim, 0.0);
    std::vector<double> grad(dim);

    for (int iter = 0; iter < hp.max_iters; ++iter) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad0 = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double p = sigmoid(x.row_dot(i, lm.w) + lm.w0);
            double err = p - static_cast<double>(y[i]);
            x.add_row_to(i, err, grad);
            grad0 += err;
        }
        double inv_n = 1.0 / static_cast<double>(n);
        double max_abs = std::abs(grad0 * inv_n);
        for (size_t j = 0; j < dim; ++j) {
            grad[j] = grad[j] * inv_n + hp.l2_strength * lm.w[j];
            max_abs = std::max(max_abs, std::abs(grad[j]));
        }
        grad0 *= inv_n;
        if (max_abs < hp.tolerance) break;
        for (size_t j = 0; j < dim; ++j) lm.w[j] -= hp.learning_rate * grad[j];
        lm.w0 -= hp.learning_rate * grad0;
    }

    Model m;
    m.algorithm = Algorithm::LogReg;
    m.feature_dim = dim;
    m.params = std::move(lm);
    m.training_seconds = timer.seconds();
    return m;
}

Model cross_validate_select(const FeatureMatrix& x, std::span<const int> y,
                            const Hyperparams& hp) {
    detail::check_labels(x, y);
    detail::FitTimer timer;
    if (hp.cv_folds < 2) config_error("cv_folds must be >= 2");
    if (hp.l2_grid.empty()) config_error("cross-validation grid is empty");

    size_t n = y.size();
    std::vector<size_t> pos, neg;
    for (size_t i = 0; i < n; ++i) (y[i] == 1 ? pos : neg).push_back(i);
    size_t folds = static_cast<size_t>(hp.cv_folds);
    if (pos.size() < folds || neg.size() < folds)
        data_error("a cross-validation fold would hold a single class; use fewer folds");

    // stratified assignment: shuffle each class, deal round-robin
    Rng rng(hp.seed);
    rng.shuffle(pos);
    rng.shuffle(neg);
    std::vector<size_t> fold_of(n);
    for (size_t i = 0; i < pos.size(); ++i) fold_of[pos[i]] = i % folds;
    for (size_t i = 0; i < neg.size(); ++i) fold_of[neg[i]] = i % folds;

    double best_acc = -1.0;
    double best_l2 = hp.l2_grid.front();
    for (double l2 : hp.l2_grid) {
        double acc_sum = 0.0;
        for (size_t f = 0; f < folds; ++f) {
            std::vector<size_t> tr, va;
            for (size_t i = 0; i < n; ++i) (fold_of[i] == f ? va : tr).push_back(i);
            std::vector<int> ytr, yva;
            for (size_t i : tr) ytr.push_back(y[i]);
            for (size_t i : va) yva.push_back(y[i]);

            Hyperparams fold_hp = hp;
            fold_hp.l2_strength = l2;
            Model fm = train_logistic_regression(x.select_rows(tr), ytr, fold_hp);
            std::vector<int> pred = predict(fm, x.select_rows(va));
            size_t hits = 0;
            for (size_t i = 0; i < pred.size(); ++i) hits += pred[i] == yva[i];
            acc_sum += static_cast<double>(hits) / static_cast<double>(pred.size());
        }
        double mean_acc = acc_sum / static_cast<double>(folds);
        // ties break toward the stronger regularizer
        if (mean_acc > best_acc || (mean_acc == best_acc && l2 > best_l2)) {
            best_acc = mean_acc;
            best_l2 = l2;
        }
    }

    Hyperparams final_hp = hp;
    final_hp.l2_strength = best_l2;
    Model m = train_logistic_regression(x, y, final_hp);
    m.algorithm = Algorithm::LogRegCV;
    std::get<LinearModel>(m.params).selected_l2 = best_l2;
    m.training_seconds = timer.seconds();
    return m;
}

Model train_linear_svm(const FeatureMatrix& x, std::span<const int> y, const Hyperparams& hp) {
    detail::check_labels(x, y);
    detail::FitTimer timer;

    size_t n = x.rows(), dim = x.cols();
    double lambda = hp.l2_strength;

    // w kept as scale * v so the per-step shrink is O(1) even on wide
    // sparse data
    std::vector<double> v(dim, 0.0);
    double scale = 1.0;
    double w0 = 0.0;

    // one fixed seeded permutation reused every epoch
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(hp.seed);
    rng.shuffle(order);

    uint64_t t = 0;
    for (int epoch = 0; epoch < hp.max_iters; ++epoch) {
        for (size_t i : order) {
            ++t;
            double eta = 1.0 / (lambda * static_cast<double>(t));
            double yi = y[i] == 1 ? 1.0 : -1.0;
            double margin = yi * (scale * x.row_dot(i, v) + w0);
            scale *= 1.0 - eta * lambda;
            if (scale == 0.0) {  // exactly the first step, where eta*lambda = 1
                std::fill(v.begin(), v.end(), 0.0);
                scale = 1.0;
            }
            if (margin < 1.0) {
                x.add_row_to(i, eta * yi / scale, v);
                w0 += eta * yi;  // intercept unregularized
            }
        }
    }

    LinearModel lm;
    lm.w.resize(dim);
    for (size_t j = 0; j < dim; ++j) lm.w[j] = scale * v[j];
    lm.w0 = w0;

    Model m;
    m.algorithm = Algorithm::LinearSVM;
    m.feature_dim = dim;
    m.params = std::move(lm);
    m.training_seconds = timer.seconds();
    return m;
}

}  // namespace jobrec
