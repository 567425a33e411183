#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oracle {

std::vector<double> jacobi_eigen_sym(std::vector<double>& a, size_t n,
                                     std::vector<double>* vectors) {
    std::vector<double> v(n * n, 0.0);
    for (size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (size_t p = 0; p < n; ++p)
            for (size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
        if (off < 1e-30) break;

        for (size_t p = 0; p + 1 < n; ++p) {
            for (size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (std::abs(apq) < 1e-300) continue;
                const double app = a[p * n + p];
                const double aqq = a[q * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double cs = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * cs;
                for (size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = cs * akp - sn * akq;
                    a[k * n + q] = sn * akp + cs * akq;
                }
                for (size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k];
                    const double aqk = a[q * n + k];
                    a[p * n + k] = cs * apk - sn * aqk;
                    a[q * n + k] = sn * apk + cs * aqk;
                }
                for (size_t k = 0; k < n; ++k) {
                    const double vkp = v[k * n + p];
                    const double vkq = v[k * n + q];
                    v[k * n + p] = cs * vkp - sn * vkq;
                    v[k * n + q] = sn * vkp + cs * vkq;
                }
            }
        }
    }

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t i, size_t j) { return a[i * n + i] > a[j * n + j]; });

    std::vector<double> eig(n);
    for (size_t i = 0; i < n; ++i) eig[i] = a[order[i] * n + order[i]];
    if (vectors) {
        vectors->assign(n * n, 0.0);
        for (size_t c = 0; c < n; ++c)
            for (size_t r = 0; r < n; ++r) (*vectors)[r * n + c] = v[r * n + order[c]];
    }
    return eig;
}

std::vector<double> singular_values(const jobrec::DenseMatrix& a) {
    const size_t m = a.rows(), n = a.cols();
    std::vector<double> gram(n * n, 0.0);
    for (size_t i = 0; i < m; ++i) {
        const auto row = a.row(i);
        for (size_t p = 0; p < n; ++p)
            for (size_t q = p; q < n; ++q) gram[p * n + q] += row[p] * row[q];
    }
    for (size_t p = 0; p < n; ++p)
        for (size_t q = 0; q < p; ++q) gram[p * n + q] = gram[q * n + p];

    std::vector<double> eig = jacobi_eigen_sym(gram, n);
    for (double& e : eig) e = std::sqrt(std::max(e, 0.0));
    return eig;
}

namespace {

// projection of a onto {0 <= a <= c, y'a = 0}: shift along y then clip,
// with the shift found by bisection (the clipped constraint value is
// monotone in the shift)
void project_feasible(std::vector<double>& a, std::span<const int> y, double c) {
    const size_t n = a.size();
    auto constraint = [&](double t) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i)
            s += static_cast<double>(y[i]) * std::clamp(a[i] + t * y[i], 0.0, c);
        return s;
    };
    double lo = -(c + 1.0) * static_cast<double>(n);
    double hi = (c + 1.0) * static_cast<double>(n);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (constraint(mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    const double t = 0.5 * (lo + hi);
    for (size_t i = 0; i < n; ++i) a[i] = std::clamp(a[i] + t * y[i], 0.0, c);
}

}  // namespace

std::vector<double> svm_dual_qp(const std::vector<std::vector<double>>& kernel,
                                std::span<const int> y, double c, int iters) {
    const size_t n = y.size();
    std::vector<std::vector<double>> q(n, std::vector<double>(n));
    double frob = 0.0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            q[i][j] = static_cast<double>(y[i]) * static_cast<double>(y[j]) * kernel[i][j];
            frob += q[i][j] * q[i][j];
        }
    const double step = 1.0 / std::sqrt(frob);

    std::vector<double> a(n, 0.0);
    project_feasible(a, y, c);
    std::vector<double> grad(n);
    for (int it = 0; it < iters; ++it) {
        for (size_t i = 0; i < n; ++i) {
            double g = -1.0;
            for (size_t j = 0; j < n; ++j) g += q[i][j] * a[j];
            grad[i] = g;
        }
        for (size_t i = 0; i < n; ++i) a[i] -= step * grad[i];
        project_feasible(a, y, c);
    }
    return a;
}

double svm_dual_bias(const std::vector<std::vector<double>>& kernel, std::span<const int> y,
                     std::span<const double> alpha, double c) {
    const size_t n = y.size();
    const double eps = 1e-8 * c;
    double sum = 0.0;
    size_t free_count = 0;
    double upper = 1e300, lower = -1e300;
    for (size_t i = 0; i < n; ++i) {
        double wx = 0.0;
        for (size_t j = 0; j < n; ++j)
            wx += alpha[j] * static_cast<double>(y[j]) * kernel[j][i];
        const double bi = static_cast<double>(y[i]) - wx;
        if (alpha[i] > eps && alpha[i] < c - eps) {
            sum += bi;
            ++free_count;
        } else if ((alpha[i] <= eps && y[i] > 0) || (alpha[i] >= c - eps && y[i] < 0)) {
            upper = std::min(upper, bi);
        } else {
            lower = std::max(lower, bi);
        }
    }
    if (free_count > 0) return sum / static_cast<double>(free_count);
    return 0.5 * (upper + lower);
}

Confusion confusion_loop(std::span<const int> pred, std::span<const int> truth) {
    Confusion c;
    for (size_t i = 0; i < pred.size(); ++i) {
        if (pred[i] == 1 && truth[i] == 1) ++c.tp;
        if (pred[i] == 1 && truth[i] == 0) ++c.fp;
        if (pred[i] == 0 && truth[i] == 0) ++c.tn;
        if (pred[i] == 0 && truth[i] == 1) ++c.fn;
    }
    return c;
}

namespace {

double gini_of(uint64_t n0, uint64_t n1) {
    const double n = static_cast<double>(n0 + n1);
    if (n == 0.0) return 0.0;
    const double p0 = static_cast<double>(n0) / n;
    const double p1 = static_cast<double>(n1) / n;
    return 1.0 - p0 * p0 - p1 * p1;
}

}  // namespace

std::optional<Split> exhaustive_root_split(const jobrec::DenseMatrix& x,
                                           std::span<const int> y) {
    const size_t n = x.rows(), dim = x.cols();
    uint64_t total1 = 0;
    for (size_t i = 0; i < n; ++i) total1 += static_cast<uint64_t>(y[i]);
    const double node_gini = gini_of(n - total1, total1);

    std::optional<Split> best;
    for (uint32_t f = 0; f < dim; ++f) {
        std::vector<size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](size_t i, size_t j) { return x.at(i, f) < x.at(j, f); });
        uint64_t left1 = 0;
        for (size_t i = 0; i + 1 < n; ++i) {
            left1 += static_cast<uint64_t>(y[order[i]]);
            if (x.at(order[i], f) == x.at(order[i + 1], f)) continue;
            const double thr = 0.5 * (x.at(order[i], f) + x.at(order[i + 1], f));
            const uint64_t nl = i + 1, nr = n - nl;
            const double wg = (static_cast<double>(nl) * gini_of(nl - left1, left1) +
                               static_cast<double>(nr) *
                                   gini_of(nr - (total1 - left1), total1 - left1)) /
                              static_cast<double>(n);
            if (wg >= node_gini - 1e-12) continue;
            if (!best || wg < best->weighted_gini) best = Split{f, thr, wg};
        }
    }
    return best;
}

std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> x, double eps) {
    std::vector<double> grad(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        const double h = eps * std::max(1.0, std::abs(x[i]));
        const double saved = x[i];
        x[i] = saved + h;
        const double up = f(x);
        x[i] = saved - h;
        const double down = f(x);
        x[i] = saved;
        grad[i] = (up - down) / (2.0 * h);
    }
    return grad;
}

std::vector<SlotRating> rating_rules(const jobrec::Profile& p, const std::string& target_title,
                                     bool is_train_user, int label) {
    const std::string target = jobrec::normalize_title(target_title);
    std::vector<SlotRating> out;
    for (uint32_t slot = 0; slot < 6; ++slot) {
        if (!p.past_jobs[slot] || p.past_jobs[slot]->job_title.empty()) continue;
        const auto& job = *p.past_jobs[slot];
        double r;
        if (jobrec::normalize_title(job.job_title) != target) {
            r = -1.0;  // rule 3: held a different title
        } else if (job.duration_months.has_value() && *job.duration_months >= 36) {
            r = 2.0;  // rule 1: three or more years in the title
        } else {
            r = 1.0;  // rule 2: shorter or unstated tenure
        }
        out.push_back({slot, r});
    }
    if (is_train_user) out.push_back({6, label == 1 ? 2.0 : -1.0});
    return out;
}

}  // namespace oracle
