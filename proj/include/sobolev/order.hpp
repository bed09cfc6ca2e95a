#pragma once

#include <cmath>
#include <limits>

#include "error.hpp"

namespace sobolev {

// Smoothness alpha with its integer part N (2N <= alpha < 2N+2) and exponent p.
class SmoothnessOrder {
public:
    explicit SmoothnessOrder(double alpha, double p = 2.0)
        : SmoothnessOrder(alpha, p, alpha > 0.0 && std::isfinite(alpha) ? static_cast<int>(std::floor(alpha / 2.0)) : -1) {}

    // Explicit N: alpha must satisfy 2N <= alpha < 2N+2.
    SmoothnessOrder(double alpha, double p, int N) : alpha_(alpha), p_(p), N_(N) {
        detail::require(std::isfinite(alpha) && alpha > 0.0, "alpha must be positive and finite");
        detail::require(N >= 0 && 2.0 * N <= alpha && alpha < 2.0 * N + 2.0,
                        "alpha outside the admissible range [2N, 2N+2)");
        detail::require(p > 1.0 && (std::isfinite(p) || p == std::numeric_limits<double>::infinity()),
                        "p must exceed 1");
    }

    double alpha() const { return alpha_; }
    double p() const { return p_; }
    int N() const { return N_; }
    // True at the lower edge alpha = 2N where Delta^N of the fundamental solution is a point mass.
    bool even_integer() const { return alpha_ == 2.0 * N_; }

private:
    double alpha_;
    double p_;
    int N_;
};

}  // namespace sobolev
