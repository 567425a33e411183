#pragma once

#include <cstdint>
#include <vector>

#include "jobrec/matrix.hpp"

namespace jobrec {

struct SVDResult {
    int k = 0;
    DenseMatrix u;              // n_rows x k, orthonormal columns
    std::vector<double> sigma;  // non-increasing, non-negative
    DenseMatrix v;              // n_cols x k, orthonormal columns
};

// Truncated SVD.  Small problems (min dimension <= 300) go through an
// exact one-sided Jacobi decomposition; larger ones use a seeded
// randomized range finder (oversampling 10, 4 power iterations) followed
// by the exact decomposition of the projected matrix.  Sign convention:
// the largest-magnitude entry of each V column is non-negative.
SVDResult truncated_svd(const FeatureMatrix& a, int k, uint64_t seed);

// X * V; fails if x.cols() != v.rows()
DenseMatrix project(const FeatureMatrix& x, const SVDResult& svd);

}  // namespace jobrec
