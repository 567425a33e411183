#include "jobrec/matrix.hpp"

#include <algorithm>

#include "jobrec/error.hpp"

namespace jobrec {

void SparseBinaryMatrix::add_row(const std::vector<uint32_t>& sorted_indices) {
    for (size_t k = 0; k < sorted_indices.size(); ++k) {
        if (sorted_indices[k] >= cols_)
            data_error("sparse row index out of range");
        if (k > 0 && sorted_indices[k] <= sorted_indices[k - 1])
            data_error("sparse row indices must be sorted and unique");
    }
    indices_.insert(indices_.end(), sorted_indices.begin(), sorted_indices.end());
    offsets_.push_back(indices_.size());
}

bool SparseBinaryMatrix::get(size_t i, size_t j) const {
    auto r = row(i);
    return std::binary_search(r.begin(), r.end(), static_cast<uint32_t>(j));
}

size_t FeatureMatrix::rows() const {
    return is_sparse() ? sparse().rows() : dense().rows();
}

size_t FeatureMatrix::cols() const {
    return is_sparse() ? sparse().cols() : dense().cols();
}

double FeatureMatrix::get(size_t i, size_t j) const {
    return is_sparse() ? (sparse().get(i, j) ? 1.0 : 0.0) : dense().at(i, j);
}

double FeatureMatrix::row_dot(size_t i, std::span<const double> w) const {
    if (is_sparse()) {
        double s = 0.0;
        for (uint32_t j : sparse().row(i)) s += w[j];
        return s;
    }
    auto r = dense().row(i);
    double s = 0.0;
    for (size_t j = 0; j < r.size(); ++j) s += r[j] * w[j];
    return s;
}

void FeatureMatrix::add_row_to(size_t i, double coef, std::span<double> out) const {
    if (is_sparse()) {
        for (uint32_t j : sparse().row(i)) out[j] += coef;
        return;
    }
    auto r = dense().row(i);
    for (size_t j = 0; j < r.size(); ++j) out[j] += coef * r[j];
}

double FeatureMatrix::row_norm_sq(size_t i) const {
    if (is_sparse()) return static_cast<double>(sparse().row(i).size());
    auto r = dense().row(i);
    double s = 0.0;
    for (double v : r) s += v * v;
    return s;
}

double FeatureMatrix::row_dot_row(const FeatureMatrix& a, size_t i,
                                  const FeatureMatrix& b, size_t j) {
    if (a.is_sparse() && b.is_sparse()) {
        auto ra = a.sparse().row(i);
        auto rb = b.sparse().row(j);
        size_t p = 0, q = 0;
        double s = 0.0;
        while (p < ra.size() && q < rb.size()) {
            if (ra[p] < rb[q]) ++p;
            else if (ra[p] > rb[q]) ++q;
            else { s += 1.0; ++p; ++q; }
        }
        return s;
    }
    if (a.is_sparse()) {
        auto ra = a.sparse().row(i);
        auto rb = b.dense().row(j);
        double s = 0.0;
        for (uint32_t c : ra) s += rb[c];
        return s;
    }
    if (b.is_sparse()) return row_dot_row(b, j, a, i);
    auto ra = a.dense().row(i);
    auto rb = b.dense().row(j);
    double s = 0.0;
    for (size_t c = 0; c < ra.size(); ++c) s += ra[c] * rb[c];
    return s;
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const size_t> idx) const {
    if (is_sparse()) {
        SparseBinaryMatrix out(cols());
        std::vector<uint32_t> buf;
        for (size_t i : idx) {
            auto r = sparse().row(i);
            buf.assign(r.begin(), r.end());
            out.add_row(buf);
        }
        return FeatureMatrix(std::move(out));
    }
    DenseMatrix out(idx.size(), cols());
    for (size_t k = 0; k < idx.size(); ++k) {
        auto src = dense().row(idx[k]);
        std::copy(src.begin(), src.end(), out.row(k).begin());
    }
    return FeatureMatrix(std::move(out));
}

DenseMatrix FeatureMatrix::multiply(const DenseMatrix& b) const {
    size_t k = b.cols();
    DenseMatrix c(rows(), k);
    if (is_sparse()) {
        const auto& s = sparse();
        for (size_t i = 0; i < s.rows(); ++i) {
            auto out = c.row(i);
            for (uint32_t j : s.row(i)) {
                auto br = b.row(j);
                for (size_t t = 0; t < k; ++t) out[t] += br[t];
            }
        }
        return c;
    }
    const auto& d = dense();
    for (size_t i = 0; i < d.rows(); ++i) {
        auto dr = d.row(i);
        auto out = c.row(i);
        for (size_t j = 0; j < d.cols(); ++j) {
            double v = dr[j];
            if (v == 0.0) continue;
            auto br = b.row(j);
            for (size_t t = 0; t < k; ++t) out[t] += v * br[t];
        }
    }
    return c;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix c(a.rows(), b.cols());
    for (size_t i = 0; i < a.rows(); ++i) {
        auto ar = a.row(i);
        auto out = c.row(i);
        for (size_t j = 0; j < a.cols(); ++j) {
            double v = ar[j];
            if (v == 0.0) continue;
            auto br = b.row(j);
            for (size_t t = 0; t < b.cols(); ++t) out[t] += v * br[t];
        }
    }
    return c;
}

DenseMatrix FeatureMatrix::multiply_transposed(const DenseMatrix& b) const {
    size_t k = b.cols();
    DenseMatrix c(cols(), k);
    if (is_sparse()) {
        const auto& s = sparse();
        for (size_t i = 0; i < s.rows(); ++i) {
            auto br = b.row(i);
            for (uint32_t j : s.row(i)) {
                auto out = c.row(j);
                for (size_t t = 0; t < k; ++t) out[t] += br[t];
            }
        }
        return c;
    }
    const auto& d = dense();
    for (size_t i = 0; i < d.rows(); ++i) {
        auto dr = d.row(i);
        auto br = b.row(i);
        for (size_t j = 0; j < d.cols(); ++j) {
            double v = dr[j];
            if (v == 0.0) continue;
            auto out = c.row(j);
            for (size_t t = 0; t < k; ++t) out[t] += v * br[t];
        }
    }
    return c;
}

}  // namespace jobrec
