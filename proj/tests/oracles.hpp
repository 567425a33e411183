// Independent reference implementations used to check the library.  These
// deliberately use different algorithms from the production code: the
// eigensolver is two-sided Jacobi on A'A (production SVD is one-sided or
// randomized), the SVM dual is solved by projected gradient (production is
// SMO), splits and metrics are exhaustive loops.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "jobrec/matrix.hpp"
#include "jobrec/profile.hpp"

namespace oracle {

// Eigendecomposition of a symmetric matrix by cyclic two-sided Jacobi
// rotations.  a is n x n row-major and is destroyed.  Eigenvalues return
// in descending order; the optional vectors matrix gets the matching
// eigenvectors as columns.
std::vector<double> jacobi_eigen_sym(std::vector<double>& a, size_t n,
                                     std::vector<double>* vectors = nullptr);

// singular values of a dense matrix, descending, via eigenvalues of A'A
std::vector<double> singular_values(const jobrec::DenseMatrix& a);

// Solves the SVM dual min 1/2 a'Qa - 1'a with 0 <= a <= C, y'a = 0 by
// projected gradient, Q_ij = y_i y_j K_ij, y in {-1,+1}.
std::vector<double> svm_dual_qp(const std::vector<std::vector<double>>& kernel,
                                std::span<const int> y, double c, int iters);

// intercept from KKT conditions of a dual solution (LIBSVM-style midpoint
// when no multiplier is strictly inside the box)
double svm_dual_bias(const std::vector<std::vector<double>>& kernel, std::span<const int> y,
                     std::span<const double> alpha, double c);

struct Confusion {
    uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
};
Confusion confusion_loop(std::span<const int> pred, std::span<const int> truth);

struct Split {
    uint32_t feature = 0;
    double threshold = 0.0;
    double weighted_gini = 0.0;
};
// Exhaustive best (feature, midpoint threshold) by weighted Gini over a
// dense matrix; mirrors the production tie rule (first feature, then first
// threshold) and requires a strict impurity decrease.
std::optional<Split> exhaustive_root_split(const jobrec::DenseMatrix& x,
                                           std::span<const int> y);

// central finite differences of f at x
std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> x, double eps = 1e-5);

struct SlotRating {
    uint32_t item = 0;
    double value = 0.0;
};
// Literal restatement of the three rating rules plus the virtual target
// item, written against the Profile fields rather than the library's
// builder.
std::vector<SlotRating> rating_rules(const jobrec::Profile& p, const std::string& target_title,
                                     bool is_train_user, int label);

}  // namespace oracle
