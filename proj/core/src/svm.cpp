#include <algorithm>
#include <cmath>
#include <limits>

#include "classifier_internal.hpp"
#include "jobrec/classifier.hpp"

namespace jobrec {

double rbf_kernel(std::span<const double> x, std::span<const double> z, double gamma) {
    if (x.size() != z.size()) data_error("rbf_kernel: vector lengths differ");
    if (gamma <= 0.0) config_error("rbf_kernel: gamma must be positive");
    double d2 = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - z[i];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

namespace {

// full RBF Gram matrix; the training sets here are at most ~1000 rows
std::vector<double> gram_matrix(const FeatureMatrix& x, double gamma) {
    size_t n = x.rows();
    std::vector<double> norm(n);
    for (size_t i = 0; i < n; ++i) norm[i] = x.row_norm_sq(i);
    std::vector<double> k(n * n);
    for (size_t i = 0; i < n; ++i) {
        k[i * n + i] = 1.0;
        for (size_t j = i + 1; j < n; ++j) {
            double d2 = norm[i] + norm[j] - 2.0 * FeatureMatrix::row_dot_row(x, i, x, j);
            double v = std::exp(-gamma * std::max(d2, 0.0));
            k[i * n + j] = v;
            k[j * n + i] = v;
        }
    }
    return k;
}

struct SmoResult {
    std::vector<double> alpha;
    double b = 0.0;
};

// Dual C-SVM: minimize 1/2 a'Qa - e'a subject to 0 <= a <= C, y'a = 0,
// with Q_ij = y_i y_j K_ij.  Pair selection picks the maximally violating
// pair; convergence when the violation gap drops below tol.
SmoResult smo_solve(const std::vector<double>& k, std::span<const double> y, double c,
                    double tol, int max_pair_updates) {
    size_t n = y.size();
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);  // grad_i = (Qa)_i - 1

    auto in_up = [&](size_t t) {
        return (y[t] > 0 && alpha[t] < c) || (y[t] < 0 && alpha[t] > 0);
    };
    auto in_low = [&](size_t t) {
        return (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < c);
    };

    double m_up = 0.0, m_low = 0.0;
    for (int iter = 0; iter < max_pair_updates; ++iter) {
        // i maximizes -y*grad over the "up" set, j minimizes it over "low"
        size_t i = n, j = n;
        m_up = -std::numeric_limits<double>::infinity();
        m_low = std::numeric_limits<double>::infinity();
        for (size_t t = 0; t < n; ++t) {
            double v = -y[t] * grad[t];
            if (in_up(t) && v > m_up) {
                m_up = v;
                i = t;
            }
            if (in_low(t) && v < m_low) {
                m_low = v;
                j = t;
            }
        }
        if (i == n || j == n || m_up - m_low < tol) break;

        const double* ki = &k[i * n];
        const double* kj = &k[j * n];
        double quad = ki[i] + kj[j] - 2.0 * ki[j];
        if (quad <= 0.0) quad = 1e-12;

        double old_ai = alpha[i], old_aj = alpha[j];
        if (y[i] != y[j]) {
            double delta = (-grad[i] - grad[j]) / quad;
            double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0) {
                if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = diff; }
            } else {
                if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = -diff; }
            }
            if (diff > 0) {
                if (alpha[i] > c) { alpha[i] = c; alpha[j] = c - diff; }
            } else {
                if (alpha[j] > c) { alpha[j] = c; alpha[i] = c + diff; }
            }
        } else {
            double delta = (grad[i] - grad[j]) / quad;
            double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c) {
                if (alpha[i] > c) { alpha[i] = c; alpha[j] = sum - c; }
            } else {
                if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = sum; }
            }
            if (sum > c) {
                if (alpha[j] > c) { alpha[j] = c; alpha[i] = sum - c; }
            } else {
                if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = sum; }
            }
        }

        double dai = (alpha[i] - old_ai) * y[i];
        double daj = (alpha[j] - old_aj) * y[j];
        for (size_t t = 0; t < n; ++t)
            grad[t] += y[t] * (ki[t] * dai + kj[t] * daj);
    }

    // b from the KKT bounds: for free vectors -y*grad equals b exactly
    SmoResult r;
    r.alpha = std::move(alpha);
    double free_sum = 0.0;
    size_t free_count = 0;
    for (size_t t = 0; t < n; ++t) {
        if (r.alpha[t] > 0 && r.alpha[t] < c) {
            free_sum += -y[t] * grad[t];
            ++free_count;
        }
    }
    if (free_count > 0) {
        r.b = free_sum / static_cast<double>(free_count);
    } else {
        r.b = (m_up + m_low) / 2.0;
        if (!std::isfinite(r.b)) r.b = 0.0;
    }
    return r;
}

KernelSvmModel build_model(const FeatureMatrix& x, std::span<const double> y,
                           const SmoResult& smo, double gamma, double c_used) {
    KernelSvmModel km;
    std::vector<size_t> sv_rows;
    for (size_t i = 0; i < y.size(); ++i) {
        if (smo.alpha[i] > 1e-12) {
            sv_rows.push_back(i);
            km.alpha_y.push_back(smo.alpha[i] * y[i]);
        }
    }
    km.support = x.select_rows(sv_rows);
    km.sv_norm_sq.reserve(sv_rows.size());
    for (size_t i = 0; i < sv_rows.size(); ++i)
        km.sv_norm_sq.push_back(km.support.row_norm_sq(i));
    km.b = smo.b;
    km.gamma = gamma;
    km.c_used = c_used;
    return km;
}

}  // namespace

Model train_kernel_svm(const FeatureMatrix& x, std::span<const int> y01, const Hyperparams& hp) {
    detail::check_labels(x, y01);
    detail::FitTimer timer;
    if (hp.C <= 0.0) config_error("kernel SVM requires C > 0");
    if (!(hp.nu > 0.0 && hp.nu <= 1.0)) config_error("nu must be in (0,1]");

    size_t n = x.rows();
    double gamma = detail::resolve_gamma(hp.rbf_gamma, x.cols());
    std::vector<double> y(n);
    for (size_t i = 0; i < n; ++i) y[i] = y01[i] == 1 ? 1.0 : -1.0;

    std::vector<double> k = gram_matrix(x, gamma);

    Model m;
    m.feature_dim = x.cols();
    if (hp.algorithm != Algorithm::KernelSvmNu) {
        SmoResult smo = smo_solve(k, y, hp.C, hp.tolerance, hp.max_iters);
        m.algorithm = Algorithm::KernelSvmC;
        m.params = build_model(x, y, smo, gamma, hp.C);
        m.training_seconds = timer.seconds();
        return m;
    }

    // nu-mode: binary search over log C for a support-vector fraction
    // within 0.05 of nu.  The fraction shrinks as C grows.
    double lo = std::log(1e-3), hi = std::log(1e4);
    double best_gap = std::numeric_limits<double>::infinity();
    SmoResult best;
    double best_c = hp.C;
    for (int it = 0; it < 20; ++it) {
        double log_c = 0.5 * (lo + hi);
        double c = std::exp(log_c);
        SmoResult smo = smo_solve(k, y, c, hp.tolerance, hp.max_iters);
        size_t sv = 0;
        for (double a : smo.alpha) sv += a > 1e-12;
        double frac = static_cast<double>(sv) / static_cast<double>(n);
        double gap = std::abs(frac - hp.nu);
        if (gap < best_gap) {
            best_gap = gap;
            best = std::move(smo);
            best_c = c;
        }
        if (gap <= 0.05) break;
        if (frac > hp.nu) lo = log_c;  // too many SVs: raise C
        else hi = log_c;
    }
    m.algorithm = Algorithm::KernelSvmNu;
    KernelSvmModel km = build_model(x, y, best, gamma, best_c);
    km.nu_warning = best_gap > 0.05;
    m.params = std::move(km);
    m.training_seconds = timer.seconds();
    return m;
}

}  // namespace jobrec
