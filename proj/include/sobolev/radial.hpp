#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>

#include "error.hpp"

namespace sobolev {

// Exact fraction with 64-bit parts; arithmetic throws on overflow.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(std::int64_t n, std::int64_t d) {
        detail::require(d != 0, "Rational: zero denominator");
        if (d < 0) n = -n, d = -d;
        std::int64_t g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) n /= g, d /= g;
        return {n, d};
    }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
    friend bool operator==(const Rational&, const Rational&) = default;
};

namespace detail {
inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw domain_error("Rational: overflow");
    return r;
}
inline void check_dim(int dim) { require(dim >= 1 && dim <= 3, "dimension must be 1, 2 or 3"); }
}  // namespace detail

inline Rational operator*(const Rational& a, const Rational& b) {
    auto g1 = std::gcd(a.num < 0 ? -a.num : a.num, b.den);
    auto g2 = std::gcd(b.num < 0 ? -b.num : b.num, a.den);
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    return Rational::make(detail::checked_mul(a.num / g1, b.num / g2),
                          detail::checked_mul(a.den / g2, b.den / g1));
}
inline Rational operator/(const Rational& a, const Rational& b) {
    detail::require(b.num != 0, "Rational: division by zero");
    return a * Rational::make(b.den, b.num);
}

// Volume of the unit ball in R^dim.
inline double ball_volume(int dim) {
    detail::check_dim(dim);
    constexpr double v[] = {2.0, std::numbers::pi, 4.0 * std::numbers::pi / 3.0};
    return v[dim - 1];
}

// Surface measure of the unit sphere in R^dim.
inline double sphere_area(int dim) { return dim * ball_volume(dim); }

// Mean of |h|^{2j} over the unit ball: n / (n + 2j).
inline Rational moment_M(int dim, int j) {
    detail::check_dim(dim);
    detail::require(j >= 0, "moment_M: j must be non-negative");
    return Rational::make(dim, dim + 2 * j);
}

// Delta^j |x|^{2j} via Delta |x|^{2m} = 2m(2m+n-2)|x|^{2m-2}.
inline Rational laplacian_power_L(int dim, int j) {
    detail::check_dim(dim);
    detail::require(j >= 0, "laplacian_power_L: j must be non-negative");
    std::int64_t L = 1;
    for (int m = 1; m <= j; ++m) L = detail::checked_mul(L, detail::checked_mul(2 * m, 2 * m + dim - 2));
    return {L, 1};
}

struct BallConstants {
    int dim = 0;
    int j = 0;
    Rational M;
    Rational L;
    double ratio() const { return M.value() / L.value(); }
};

inline BallConstants ball_constants(int dim, int j) {
    return {dim, j, moment_M(dim, j), laplacian_power_L(dim, j)};
}

// c_j = M_j / L_j in floating point, valid for any j (no overflow):
// c_0 = 1, c_j = c_{j-1} / (2j (n + 2j)).
inline double profile_coefficient(int dim, int j) {
    detail::check_dim(dim);
    detail::require(j >= 0, "profile_coefficient: j must be non-negative");
    double c = 1.0;
    for (int i = 1; i <= j; ++i) c /= 2.0 * i * (dim + 2.0 * i);
    return c;
}

namespace detail {

inline constexpr double profile_series_limit = 2.0;

// sum_{j >= first} (-1)^j c_j tau^{2j}
inline double profile_series(int dim, double tau, int first) {
    double t2 = tau * tau;
    double c = profile_coefficient(dim, first);
    double term = c * std::pow(t2, first) * (first % 2 ? -1.0 : 1.0);
    double sum = 0.0;
    for (int j = first; j < first + 60; ++j) {
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
        term *= -t2 / (2.0 * (j + 1) * (dim + 2.0 * (j + 1)));
    }
    return sum;
}

inline void check_tau(double tau) {
    require(std::isfinite(tau) && tau >= 0.0, "profile argument must be finite and non-negative");
}

}  // namespace detail

// F(tau): Fourier transform of the normalized unit-ball indicator at |xi| = tau.
inline double ball_profile(int dim, double tau) {
    detail::check_dim(dim);
    detail::check_tau(tau);
    if (tau < detail::profile_series_limit) return detail::profile_series(dim, tau, 0);
    switch (dim) {
        case 1: return std::sin(tau) / tau;
        case 2: return 2.0 * std::cyl_bessel_j(1.0, tau) / tau;
        default: return 3.0 * (std::sin(tau) - tau * std::cos(tau)) / (tau * tau * tau);
    }
}

// F(tau) - 1 without cancellation at small tau.
inline double ball_profile_minus_one(int dim, double tau) {
    detail::check_dim(dim);
    detail::check_tau(tau);
    if (tau < detail::profile_series_limit) return detail::profile_series(dim, tau, 1);
    return ball_profile(dim, tau) - 1.0;
}

class RadialProfile {
public:
    explicit RadialProfile(int dim) : dim_(dim) { detail::check_dim(dim); }
    int dim() const { return dim_; }
    double operator()(double tau) const { return ball_profile(dim_, tau); }
    double minus_one(double tau) const { return ball_profile_minus_one(dim_, tau); }

private:
    int dim_;
};

}  // namespace sobolev
