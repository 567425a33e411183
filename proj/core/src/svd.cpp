#include "jobrec/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "jobrec/error.hpp"
#include "jobrec/rng.hpp"

namespace jobrec {
namespace {

constexpr size_t kExactMinDim = 300;   // exact path when min dimension is at most this
constexpr size_t kExactMaxDim = 5000;  // and the other dimension fits a dense copy
constexpr int kMaxSweeps = 60;

double col_dot(const DenseMatrix& m, size_t p, size_t q) {
    double s = 0.0;
    for (size_t i = 0; i < m.rows(); ++i) s += m.at(i, p) * m.at(i, q);
    return s;
}

// Modified Gram-Schmidt with one re-orthogonalization pass.  Columns that
// vanish (rank deficiency) are replaced by canonical basis vectors made
// orthogonal to everything before them, so the result is always a full
// orthonormal set.
void orthonormalize_columns(DenseMatrix& m) {
    size_t rows = m.rows(), cols = m.cols();
    size_t next_canonical = 0;
    for (size_t j = 0; j < cols; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (size_t p = 0; p < j; ++p) {
                double d = col_dot(m, p, j);
                for (size_t i = 0; i < rows; ++i) m.at(i, j) -= d * m.at(i, p);
            }
        }
        double norm = std::sqrt(col_dot(m, j, j));
        if (norm > 1e-12) {
            for (size_t i = 0; i < rows; ++i) m.at(i, j) /= norm;
            continue;
        }
        // degenerate column: seed from the canonical basis until one survives
        bool ok = false;
        while (next_canonical < rows && !ok) {
            for (size_t i = 0; i < rows; ++i) m.at(i, j) = i == next_canonical ? 1.0 : 0.0;
            ++next_canonical;
            for (int pass = 0; pass < 2; ++pass) {
                for (size_t p = 0; p < j; ++p) {
                    double d = col_dot(m, p, j);
                    for (size_t i = 0; i < rows; ++i) m.at(i, j) -= d * m.at(i, p);
                }
            }
            norm = std::sqrt(col_dot(m, j, j));
            if (norm > 1e-6) {
                for (size_t i = 0; i < rows; ++i) m.at(i, j) /= norm;
                ok = true;
            }
        }
        if (!ok) data_error("orthonormalization failed: rank smaller than requested basis");
    }
}

// One-sided Jacobi on a tall matrix (rows >= cols): returns U (normalized
// columns of the rotated matrix), sigma (column norms, descending) and V
// (accumulated rotations), so that input = U * diag(sigma) * V^T.
void onesided_jacobi(DenseMatrix a, DenseMatrix& u, std::vector<double>& sigma, DenseMatrix& v) {
    size_t n = a.cols();
    v = DenseMatrix(n, n);
    for (size_t i = 0; i < n; ++i) v.at(i, i) = 1.0;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (size_t p = 0; p + 1 < n; ++p) {
            for (size_t q = p + 1; q < n; ++q) {
                double app = col_dot(a, p, p);
                double aqq = col_dot(a, q, q);
                double apq = col_dot(a, p, q);
                if (std::abs(apq) <= 1e-15 * std::sqrt(app * aqq) || apq == 0.0) continue;
                rotated = true;
                double zeta = (aqq - app) / (2.0 * apq);
                double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double cs = 1.0 / std::sqrt(1.0 + t * t);
                double sn = cs * t;
                for (size_t i = 0; i < a.rows(); ++i) {
                    double ap = a.at(i, p), aq = a.at(i, q);
                    a.at(i, p) = cs * ap - sn * aq;
                    a.at(i, q) = sn * ap + cs * aq;
                }
                for (size_t i = 0; i < n; ++i) {
                    double vp = v.at(i, p), vq = v.at(i, q);
                    v.at(i, p) = cs * vp - sn * vq;
                    v.at(i, q) = sn * vp + cs * vq;
                }
            }
        }
        if (!rotated) break;
    }

    sigma.assign(n, 0.0);
    for (size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(col_dot(a, j, j));

    // descending order
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t x, size_t y) { return sigma[x] > sigma[y]; });

    DenseMatrix a_sorted(a.rows(), n), v_sorted(n, n);
    std::vector<double> s_sorted(n);
    for (size_t j = 0; j < n; ++j) {
        size_t src = order[j];
        s_sorted[j] = sigma[src];
        for (size_t i = 0; i < a.rows(); ++i) a_sorted.at(i, j) = a.at(i, src);
        for (size_t i = 0; i < n; ++i) v_sorted.at(i, j) = v.at(i, src);
    }
    sigma = std::move(s_sorted);
    v = std::move(v_sorted);

    // normalize columns into U; zero singular values get an orthonormal
    // completion so U is a proper basis regardless of rank
    u = std::move(a_sorted);
    size_t first_zero = n;
    for (size_t j = 0; j < n; ++j) {
        if (sigma[j] > 1e-12) {
            for (size_t i = 0; i < u.rows(); ++i) u.at(i, j) /= sigma[j];
        } else {
            first_zero = std::min(first_zero, j);
        }
    }
    if (first_zero < n) {
        for (size_t j = first_zero; j < n; ++j)
            for (size_t i = 0; i < u.rows(); ++i) u.at(i, j) = 0.0;
        orthonormalize_columns(u);
    }
}

DenseMatrix to_dense(const FeatureMatrix& a) {
    DenseMatrix d(a.rows(), a.cols());
    if (a.is_sparse()) {
        const auto& s = a.sparse();
        for (size_t i = 0; i < s.rows(); ++i)
            for (uint32_t j : s.row(i)) d.at(i, j) = 1.0;
    } else {
        d = a.dense();
    }
    return d;
}

DenseMatrix transpose(const DenseMatrix& m) {
    DenseMatrix t(m.cols(), m.rows());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) t.at(j, i) = m.at(i, j);
    return t;
}

void truncate(SVDResult& r, int k) {
    size_t kk = static_cast<size_t>(k);
    if (r.sigma.size() == kk) {
        r.k = k;
        return;
    }
    DenseMatrix u(r.u.rows(), kk), v(r.v.rows(), kk);
    for (size_t i = 0; i < r.u.rows(); ++i)
        for (size_t j = 0; j < kk; ++j) u.at(i, j) = r.u.at(i, j);
    for (size_t i = 0; i < r.v.rows(); ++i)
        for (size_t j = 0; j < kk; ++j) v.at(i, j) = r.v.at(i, j);
    r.u = std::move(u);
    r.v = std::move(v);
    r.sigma.resize(kk);
    r.k = k;
}

void apply_sign_convention(SVDResult& r) {
    for (size_t j = 0; j < static_cast<size_t>(r.k); ++j) {
        size_t arg = 0;
        double best = -1.0;
        for (size_t i = 0; i < r.v.rows(); ++i) {
            double mag = std::abs(r.v.at(i, j));
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        if (r.v.at(arg, j) < 0.0) {
            for (size_t i = 0; i < r.v.rows(); ++i) r.v.at(i, j) = -r.v.at(i, j);
            for (size_t i = 0; i < r.u.rows(); ++i) r.u.at(i, j) = -r.u.at(i, j);
        }
    }
}

SVDResult exact_svd(const FeatureMatrix& a, int k) {
    DenseMatrix d = to_dense(a);
    SVDResult r;
    if (d.rows() >= d.cols()) {
        onesided_jacobi(std::move(d), r.u, r.sigma, r.v);
    } else {
        // decompose the transpose and swap factor roles
        DenseMatrix u, v;
        onesided_jacobi(transpose(d), u, r.sigma, v);
        r.u = std::move(v);
        r.v = std::move(u);
    }
    truncate(r, k);
    return r;
}

}  // namespace

SVDResult truncated_svd(const FeatureMatrix& a, int k, uint64_t seed) {
    size_t m = a.rows(), n = a.cols();
    size_t min_dim = std::min(m, n);
    if (k < 1 || static_cast<size_t>(k) > min_dim)
        config_error("svd k must be in [1, min(rows, cols)], got " + std::to_string(k));

    if (min_dim <= kExactMinDim && std::max(m, n) <= kExactMaxDim) {
        SVDResult r = exact_svd(a, k);
        apply_sign_convention(r);
        return r;
    }

    // randomized range finder, then exact decomposition of the projection
    size_t l = std::min(static_cast<size_t>(k) + 10, min_dim);
    Rng rng(seed);
    DenseMatrix omega(n, l);
    for (auto& v : omega.data()) v = rng.normal();

    DenseMatrix q = a.multiply(omega);  // m x l
    orthonormalize_columns(q);
    for (int it = 0; it < 4; ++it) {
        DenseMatrix z = a.multiply_transposed(q);  // n x l
        orthonormalize_columns(z);
        q = a.multiply(z);  // m x l
        orthonormalize_columns(q);
    }

    DenseMatrix b = a.multiply_transposed(q);  // n x l, tall because n > l
    SVDResult r;
    DenseMatrix w, z;
    onesided_jacobi(std::move(b), w, r.sigma, z);
    r.u = matmul(q, z);  // m x l, orthonormal: Q orthonormal, Z rotation
    r.v = std::move(w);
    truncate(r, k);
    apply_sign_convention(r);
    return r;
}

DenseMatrix project(const FeatureMatrix& x, const SVDResult& svd) {
    if (x.cols() != svd.v.rows())
        data_error("projection dimension mismatch: matrix has " + std::to_string(x.cols()) +
                   " columns, factors expect " + std::to_string(svd.v.rows()));
    return x.multiply(svd.v);
}

}  // namespace jobrec
