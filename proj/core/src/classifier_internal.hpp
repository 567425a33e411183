#pragma once

#include <chrono>
#include <span>

#include "jobrec/error.hpp"
#include "jobrec/matrix.hpp"

namespace jobrec::detail {

// y must be {0,1} with both classes present
inline void check_labels(const FeatureMatrix& x, std::span<const int> y) {
    if (x.rows() != y.size()) data_error("feature row count does not match label count");
    if (y.size() < 2) data_error("need at least 2 training examples");
    size_t pos = 0;
    for (int v : y) {
        if (v != 0 && v != 1) data_error("labels must be 0 or 1");
        pos += static_cast<size_t>(v);
    }
    if (pos == 0 || pos == y.size()) data_error("training labels contain a single class");
}

class FitTimer {
public:
    FitTimer() : t0_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

private:
    std::chrono::steady_clock::time_point t0_;
};

inline double resolve_gamma(double rbf_gamma, size_t feature_dim) {
    return rbf_gamma > 0.0 ? rbf_gamma : 1.0 / static_cast<double>(feature_dim);
}

}  // namespace jobrec::detail
