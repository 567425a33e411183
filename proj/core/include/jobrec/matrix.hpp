#pragma once

#include <cassert>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace jobrec {

// row-major dense matrix of doubles
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(size_t rows, size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    double& at(size_t i, size_t j) { return data_[i * cols_ + j]; }
    double at(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

private:
    size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

// document x term presence matrix; each row is a sorted unique list of
// column indices, every stored entry has value 1
class SparseBinaryMatrix {
public:
    explicit SparseBinaryMatrix(size_t cols = 0) : cols_(cols) { offsets_.push_back(0); }

    // indices must be sorted, unique and < cols()
    void add_row(const std::vector<uint32_t>& sorted_indices);

    size_t rows() const { return offsets_.size() - 1; }
    size_t cols() const { return cols_; }
    size_t nnz() const { return indices_.size(); }

    std::span<const uint32_t> row(size_t i) const {
        return {indices_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }

    bool get(size_t i, size_t j) const;

private:
    size_t cols_;
    std::vector<uint32_t> indices_;
    std::vector<size_t> offsets_;
};

// One feature matrix type for both layouts.  Classifiers and the SVD are
// written against this interface so each algorithm has a single code path
// for raw n-gram features (sparse) and embedded/reduced features (dense).
class FeatureMatrix {
public:
    FeatureMatrix() : m_(DenseMatrix()) {}
    FeatureMatrix(DenseMatrix m) : m_(std::move(m)) {}
    FeatureMatrix(SparseBinaryMatrix m) : m_(std::move(m)) {}

    bool is_sparse() const { return std::holds_alternative<SparseBinaryMatrix>(m_); }
    size_t rows() const;
    size_t cols() const;

    double get(size_t i, size_t j) const;

    // x_i . w  (w has cols() entries)
    double row_dot(size_t i, std::span<const double> w) const;

    // out += coef * x_i
    void add_row_to(size_t i, double coef, std::span<double> out) const;

    double row_norm_sq(size_t i) const;

    // x_i . z_j where z_j is a row of another feature matrix
    static double row_dot_row(const FeatureMatrix& a, size_t i, const FeatureMatrix& b, size_t j);

    FeatureMatrix select_rows(std::span<const size_t> idx) const;

    // C = A  * B   (rows x k), B is cols() x k
    DenseMatrix multiply(const DenseMatrix& b) const;
    // C = A^T * B  (cols x k), B is rows() x k
    DenseMatrix multiply_transposed(const DenseMatrix& b) const;

    const DenseMatrix& dense() const { return std::get<DenseMatrix>(m_); }
    const SparseBinaryMatrix& sparse() const { return std::get<SparseBinaryMatrix>(m_); }

private:
    std::variant<DenseMatrix, SparseBinaryMatrix> m_;
};

// plain dense product, a.cols() == b.rows()
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace jobrec
