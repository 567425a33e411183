#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "jobrec/classifier.hpp"
#include "jobrec/error.hpp"
#include "jobrec/rng.hpp"
#include "oracles.hpp"

using namespace jobrec;

namespace {

struct Problem {
    DenseMatrix x;
    std::vector<int> y01;
};

Problem two_blob_problem(uint64_t seed, size_t n, double gap) {
    Rng rng(seed);
    Problem p{DenseMatrix(n, 2), std::vector<int>(n)};
    for (size_t i = 0; i < n; ++i) {
        p.y01[i] = i % 2;
        p.x.at(i, 0) = rng.normal() + (p.y01[i] == 1 ? gap : -gap);
        p.x.at(i, 1) = rng.normal();
    }
    return p;
}

std::vector<std::vector<double>> rbf_gram(const DenseMatrix& x, double gamma) {
    const size_t n = x.rows();
    std::vector<std::vector<double>> k(n, std::vector<double>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            k[i][j] = rbf_kernel(x.row(i), x.row(j), gamma);
    return k;
}

size_t count_hits(const std::vector<int>& pred, const std::vector<int>& y) {
    size_t hits = 0;
    for (size_t i = 0; i < pred.size(); ++i) hits += pred[i] == y[i];
    return hits;
}

}  // namespace

// Checks the SMO solution against an independently solved dual: with a
// strictly positive-definite RBF Gram matrix the dual optimum is unique,
// so decision values must agree.
TEST(KernelSvm, DecisionMatchesProjectedGradientDual) {
    const Problem p = two_blob_problem(41, 14, 1.2);
    const double c = 1.0, gamma = 0.5;

    Hyperparams hp = default_hyperparams(Algorithm::KernelSvmC);
    hp.C = c;
    hp.rbf_gamma = gamma;
    hp.tolerance = 1e-8;
    hp.max_iters = 200000;
    const Model m = train_kernel_svm(FeatureMatrix(p.x), p.y01, hp);
    const std::vector<double> got = predict_score(m, FeatureMatrix(p.x));

    const auto gram = rbf_gram(p.x, gamma);
    std::vector<int> ypm(p.y01.size());
    for (size_t i = 0; i < ypm.size(); ++i) ypm[i] = p.y01[i] == 1 ? 1 : -1;
    const std::vector<double> alpha = oracle::svm_dual_qp(gram, ypm, c, 60000);
    const double b = oracle::svm_dual_bias(gram, ypm, alpha, c);
    for (size_t i = 0; i < p.x.rows(); ++i) {
        double dec = b;
        for (size_t j = 0; j < p.x.rows(); ++j) dec += alpha[j] * ypm[j] * gram[j][i];
        EXPECT_NEAR(got[i], dec, 1e-3);
    }
}

// XOR is the canonical non-linearly-separable layout: RBF must fit it,
// a linear boundary cannot.
TEST(KernelSvm, SolvesXorWhereLinearCannot) {
    DenseMatrix x(40, 2);
    std::vector<int> y(40);
    Rng rng(42);
    for (size_t i = 0; i < 40; ++i) {
        const double a = (i & 1) ? 1.0 : -1.0;
        const double b = (i & 2) ? 1.0 : -1.0;
        x.at(i, 0) = a + 0.1 * rng.normal();
        x.at(i, 1) = b + 0.1 * rng.normal();
        y[i] = a * b > 0 ? 1 : 0;
    }
    Hyperparams khp = default_hyperparams(Algorithm::KernelSvmC);
    khp.C = 10.0;
    const Model km = train_kernel_svm(FeatureMatrix(x), y, khp);
    EXPECT_EQ(count_hits(predict(km, FeatureMatrix(x)), y), 40u);

    Hyperparams lhp = default_hyperparams(Algorithm::LinearSVM);
    const Model lm = train_linear_svm(FeatureMatrix(x), y, lhp);
    EXPECT_LE(count_hits(predict(lm, FeatureMatrix(x)), y), 30u);
}

TEST(LinearSvm, SeparableDataAndMarginScores) {
    const Problem p = two_blob_problem(43, 80, 3.0);
    Hyperparams hp = default_hyperparams(Algorithm::LinearSVM);
    const Model m = train_linear_svm(FeatureMatrix(p.x), p.y01, hp);
    // the unregularized intercept anneals at 1/(lambda t), so the default
    // 100 epochs still carries bias noise on centered blobs; the bulk of
    // the structure must be captured and more epochs must reach ~optimal
    EXPECT_GE(count_hits(predict(m, FeatureMatrix(p.x)), p.y01), 70u);
    Hyperparams hp_long = hp;
    hp_long.max_iters = 1000;
    const Model m_long = train_linear_svm(FeatureMatrix(p.x), p.y01, hp_long);
    EXPECT_GE(count_hits(predict(m_long, FeatureMatrix(p.x)), p.y01), 77u);

    // score is the raw margin and the label is its sign
    const std::vector<double> s = predict_score(m, FeatureMatrix(p.x));
    const std::vector<int> pred = predict(m, FeatureMatrix(p.x));
    for (size_t i = 0; i < s.size(); ++i) EXPECT_EQ(pred[i], s[i] >= 0.0 ? 1 : 0);
    double lo = 1e300, hi = -1e300;
    for (double v : s) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    EXPECT_LT(lo, 0.0);
    EXPECT_GT(hi, 1.0);
}

TEST(LinearSvm, DeterministicPerSeed) {
    const Problem p = two_blob_problem(44, 60, 1.0);
    Hyperparams hp = default_hyperparams(Algorithm::LinearSVM);
    const Model a = train_linear_svm(FeatureMatrix(p.x), p.y01, hp);
    const Model b = train_linear_svm(FeatureMatrix(p.x), p.y01, hp);
    EXPECT_EQ(std::get<LinearModel>(a.params).w, std::get<LinearModel>(b.params).w);
    EXPECT_EQ(std::get<LinearModel>(a.params).w0, std::get<LinearModel>(b.params).w0);
}

// nu mode searches C until the support-vector fraction lands near nu.
TEST(KernelSvm, NuModeHitsSupportFraction) {
    const Problem p = two_blob_problem(45, 60, 0.8);
    Hyperparams hp = default_hyperparams(Algorithm::KernelSvmNu);
    hp.algorithm = Algorithm::KernelSvmNu;
    hp.nu = 0.5;
    const Model m = train_kernel_svm(FeatureMatrix(p.x), p.y01, hp);
    const auto& km = std::get<KernelSvmModel>(m.params);
    EXPECT_FALSE(km.nu_warning);
    const double frac =
        static_cast<double>(km.support.rows()) / static_cast<double>(p.x.rows());
    EXPECT_NEAR(frac, 0.5, 0.0501);
    EXPECT_GT(km.c_used, 0.0);
}

TEST(KernelSvm, StoresOnlySupportVectors) {
    const Problem p = two_blob_problem(46, 40, 2.5);
    Hyperparams hp = default_hyperparams(Algorithm::KernelSvmC);
    const Model m = train_kernel_svm(FeatureMatrix(p.x), p.y01, hp);
    const auto& km = std::get<KernelSvmModel>(m.params);
    ASSERT_GT(km.support.rows(), 0u);
    // well-separated blobs leave most points outside the margin
    EXPECT_LT(km.support.rows(), p.x.rows());
    EXPECT_EQ(km.support.rows(), km.alpha_y.size());
    for (double ay : km.alpha_y) EXPECT_NE(ay, 0.0);
}

TEST(Svm, RejectsBadConfig) {
    const Problem p = two_blob_problem(47, 10, 1.0);
    Hyperparams hp = default_hyperparams(Algorithm::KernelSvmC);
    hp.C = 0.0;
    EXPECT_THROW(train_kernel_svm(FeatureMatrix(p.x), p.y01, hp), Error);
    hp = default_hyperparams(Algorithm::KernelSvmNu);
    hp.algorithm = Algorithm::KernelSvmNu;
    hp.nu = 0.0;
    EXPECT_THROW(train_kernel_svm(FeatureMatrix(p.x), p.y01, hp), Error);
}
