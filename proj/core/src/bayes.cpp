#include <cmath>

#include "classifier_internal.hpp"
#include "jobrec/classifier.hpp"

namespace jobrec {
namespace {

// Bernoulli with add-1 smoothing: P(f=1|c) = (count + 1) / (n_c + 2).
// Scoring keeps a per-class base of sum(log(1-p)) so a document costs
// O(nnz), not O(dim).
BernoulliNbModel fit_bernoulli(const FeatureMatrix& x, std::span<const int> y) {
    size_t n = x.rows(), dim = x.cols();
    size_t n_class[2] = {0, 0};
    for (int v : y) ++n_class[v];

    DenseMatrix counts(2, dim);
    const auto& s = x.sparse();
    for (size_t i = 0; i < n; ++i) {
        auto r = counts.row(static_cast<size_t>(y[i]));
        for (uint32_t j : s.row(i)) r[j] += 1.0;
    }

    BernoulliNbModel nb;
    nb.log_prior = {std::log(static_cast<double>(n_class[0]) / static_cast<double>(n)),
                    std::log(static_cast<double>(n_class[1]) / static_cast<double>(n))};
    nb.log_p = DenseMatrix(2, dim);
    nb.log_1mp = DenseMatrix(2, dim);
    nb.base_score.assign(2, 0.0);
    for (int c = 0; c < 2; ++c) {
        double base = nb.log_prior[static_cast<size_t>(c)];
        for (size_t j = 0; j < dim; ++j) {
            double p = (counts.at(static_cast<size_t>(c), j) + 1.0) /
                       (static_cast<double>(n_class[c]) + 2.0);
            nb.log_p.at(static_cast<size_t>(c), j) = std::log(p);
            nb.log_1mp.at(static_cast<size_t>(c), j) = std::log(1.0 - p);
            base += std::log(1.0 - p);
        }
        nb.base_score[static_cast<size_t>(c)] = base;
    }
    return nb;
}

GaussianNbModel fit_gaussian(const FeatureMatrix& x, std::span<const int> y) {
    size_t n = x.rows(), dim = x.cols();
    size_t n_class[2] = {0, 0};
    for (int v : y) ++n_class[v];

    GaussianNbModel nb;
    nb.log_prior = {std::log(static_cast<double>(n_class[0]) / static_cast<double>(n)),
                    std::log(static_cast<double>(n_class[1]) / static_cast<double>(n))};
    nb.mean = DenseMatrix(2, dim);
    nb.var = DenseMatrix(2, dim);
    for (size_t i = 0; i < n; ++i) {
        auto mr = nb.mean.row(static_cast<size_t>(y[i]));
        for (size_t j = 0; j < dim; ++j) mr[j] += x.get(i, j);
    }
    for (int c = 0; c < 2; ++c) {
        auto mr = nb.mean.row(static_cast<size_t>(c));
        for (size_t j = 0; j < dim; ++j) mr[j] /= static_cast<double>(n_class[c]);
    }
    for (size_t i = 0; i < n; ++i) {
        auto mr = nb.mean.row(static_cast<size_t>(y[i]));
        auto vr = nb.var.row(static_cast<size_t>(y[i]));
        for (size_t j = 0; j < dim; ++j) {
            double d = x.get(i, j) - mr[j];
            vr[j] += d * d;
        }
    }
    for (int c = 0; c < 2; ++c) {
        auto vr = nb.var.row(static_cast<size_t>(c));
        for (size_t j = 0; j < dim; ++j) {
            vr[j] /= static_cast<double>(n_class[c]);
            if (vr[j] < 1e-9) vr[j] = 1e-9;
        }
    }
    return nb;
}

}  // namespace

Model train_naive_bayes(const FeatureMatrix& x, std::span<const int> y, const Hyperparams& hp) {
    (void)hp;
    detail::check_labels(x, y);
    detail::FitTimer timer;

    Model m;
    m.algorithm = Algorithm::NaiveBayes;
    m.feature_dim = x.cols();
    if (x.is_sparse())
        m.params = fit_bernoulli(x, y);
    else
        m.params = fit_gaussian(x, y);
    m.training_seconds = timer.seconds();
    return m;
}

}  // namespace jobrec
