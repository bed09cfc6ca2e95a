#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "error.hpp"
#include "order.hpp"
#include "quadrature.hpp"
#include "radial.hpp"

namespace sobolev {

// Phi(tau) = F(tau) - sum_{j<N} (-1)^j c_j tau^{2j} - (-1)^N c_N tau^{2N} F(tau), N >= 1,
// and Phi = F - 1 for N = 0. This is the Fourier multiplier of the ball-averaged
// corrected remainder when g_j = Delta^j f / L_j.
class DeficitSpec {
public:
    DeficitSpec(int dim, const SmoothnessOrder& order) : dim_(dim), alpha_(order.alpha()), N_(order.N()) {
        detail::check_dim(dim);
        for (int j = 0; j <= N_; ++j) {
            double c = ball_constants(dim, j).ratio();
            coefficients_.push_back(j % 2 ? -c : c);
        }
        // Small-tau expansion: Phi = sum_{m>=1} a_m tau^{2(N+m)}.
        double cN = profile_coefficient(dim, N_);
        for (int m = 1; m <= 40; ++m) {
            double a = profile_coefficient(dim, N_ + m) - (N_ >= 1 ? cN * profile_coefficient(dim, m) : 0.0);
            series_.push_back(((N_ + m) % 2 ? -a : a));
        }
    }
    DeficitSpec(int dim, double alpha) : DeficitSpec(dim, SmoothnessOrder(alpha)) {}

    int dim() const { return dim_; }
    double alpha() const { return alpha_; }
    int N() const { return N_; }
    // (-1)^j M_j / L_j for j = 0..N.
    const std::vector<double>& coefficients() const { return coefficients_; }
    // a_m multiplying tau^{2(N+m)}, m = 1, 2, ...
    const std::vector<double>& series() const { return series_; }
    int series_power(std::size_t m_index) const { return 2 * (N_ + static_cast<int>(m_index) + 1); }

    double operator()(double tau) const {
        detail::check_tau(tau);
        if (tau < detail::profile_series_limit) {
            double t2 = tau * tau, pw = std::pow(t2, N_ + 1), sum = 0.0;
            for (double a : series_) {
                double term = a * pw;
                sum += term;
                if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
                pw *= t2;
            }
            return sum;
        }
        double F = ball_profile(dim_, tau);
        if (N_ == 0) return F - 1.0;
        double t2 = tau * tau, pw = 1.0, poly = 0.0;
        for (int j = 0; j < N_; ++j) {
            poly += coefficients_[j] * pw;
            pw *= t2;
        }
        return F - poly - coefficients_[N_] * pw * F;
    }

private:
    int dim_;
    double alpha_;
    int N_;
    std::vector<double> coefficients_;
    std::vector<double> series_;
};

inline double multiplier_deficit(int dim, double alpha, double tau) {
    detail::require(tau >= 0.0, "multiplier_deficit: tau must be non-negative");
    return DeficitSpec(dim, alpha)(tau);
}

// F(tau) - F(2 tau), the multiplier of the zero-smoothness square function.
inline double s0_multiplier(int dim, double tau) {
    return ball_profile_minus_one(dim, tau) - ball_profile_minus_one(dim, 2.0 * tau);
}

struct ConstantResult {
    double value = 0.0;                // scheme A
    double scheme_a = 0.0;
    double scheme_b = 0.0;
    double relative_difference = 0.0;  // |A - B| / |A|
    double tail = 0.0;                 // analytic contribution beyond the cutoff
    double cutoff = 0.0;
    bool converged = false;
};

// Mean of F(tau)^2 tau^{n+1} at large tau: Gamma(n/2+1)^2 2^n / pi.
inline double profile_square_mean(int dim) {
    detail::check_dim(dim);
    double g = std::tgamma(dim / 2.0 + 1.0);
    return g * g * std::pow(2.0, dim) / std::numbers::pi;
}

namespace detail {

struct SeriesTerm {
    double power;
    double coef;
};

// int_0^u (sum_p a_p tau^{e_p})^2 tau^w dtau, termwise.
inline double series_square_integral(const std::vector<SeriesTerm>& s, double w, double u) {
    double total = 0.0;
    for (const auto& p : s)
        for (const auto& q : s) {
            double e = p.power + q.power + w + 1.0;
            total += p.coef * q.coef * std::pow(u, e) / e;
        }
    return total;
}

// Two independent evaluations of int_0^inf m(tau)^2 tau^w dtau. Both share the
// analytic tail beyond `cutoff` and the small-tau series of m.
template <class M>
ConstantResult two_scheme_integral(const std::vector<SeriesTerm>& series, double w, const M& m, double tail,
                                   double cutoff, double tol) {
    auto integrand = [&](double tau) {
        double v = m(tau);
        return v * v * std::pow(tau, w);
    };
    ConstantResult r;
    r.tail = tail;
    r.cutoff = cutoff;

    // Scheme A: exact series on [0,1], adaptive Gauss-Kronrod on unit panels.
    double a = series_square_integral(series, w, 1.0);
    double scale = std::abs(a) + std::abs(tail);
    bool ok = true;
    for (double lo = 1.0; lo < cutoff; lo += 1.0) {
        double hi = std::min(lo + 1.0, cutoff);
        auto q = integrate_adaptive(integrand, lo, hi, 1e-13, 1e-16 * scale, 200);
        ok = ok && q.converged;
        a += q.value;
    }
    a += tail;

    // Scheme B: series only on [0,1e-3], Gauss-Legendre in log tau up to 2, then
    // Gauss-Legendre on half-unit panels.
    constexpr double tau0 = 1e-3;
    double b = series_square_integral(series, w, tau0);
    double u0 = std::log(tau0), u1 = std::log(2.0);
    int nlog = static_cast<int>(std::ceil((u1 - u0) / 0.25));
    for (int i = 0; i < nlog; ++i) {
        double ua = u0 + (u1 - u0) * i / nlog, ub = u0 + (u1 - u0) * (i + 1) / nlog;
        b += integrate_gauss([&](double u) { double t = std::exp(u); return integrand(t) * t; }, ua, ub, 20);
    }
    for (double lo = 2.0; lo < cutoff; lo += 0.5) b += integrate_gauss(integrand, lo, std::min(lo + 0.5, cutoff), 16);
    b += tail;

    r.value = r.scheme_a = a;
    r.scheme_b = b;
    r.relative_difference = std::abs(a - b) / std::abs(a);
    r.converged = ok && r.relative_difference <= tol && std::isfinite(a) && a > 0.0;
    if (!r.converged)
        throw convergence_error("integral did not converge to the requested tolerance", a, r.relative_difference);
    return r;
}

}  // namespace detail

// I(alpha, n) = int_0^inf Phi(tau)^2 tau^{-2 alpha - 1} dtau.
inline ConstantResult constant_I(int dim, const SmoothnessOrder& order, double tol = 1e-8) {
    detail::require(tol > 0.0, "constant_I: tol must be positive");
    DeficitSpec phi(dim, order);
    const int N = phi.N();
    const double alpha = phi.alpha();
    const double w = -2.0 * alpha - 1.0;
    const double T = 2000.0;

    std::vector<detail::SeriesTerm> series;
    for (std::size_t m = 0; m < phi.series().size(); ++m) series.push_back({double(phi.series_power(m)), phi.series()[m]});

    // Beyond T: Phi = P + G F with polynomials P, G; F^2 replaced by its mean.
    std::vector<detail::SeriesTerm> P, G;
    if (N == 0) {
        P.push_back({0.0, -1.0});
        G.push_back({0.0, 1.0});
    } else {
        for (int j = 0; j < N; ++j) P.push_back({2.0 * j, -phi.coefficients()[j]});
        G.push_back({0.0, 1.0});
        G.push_back({2.0 * N, -phi.coefficients()[N]});
    }
    const double kappa = profile_square_mean(dim);
    double tail = 0.0;
    auto upper = [&](double e) { return std::pow(T, e + 1.0) / -(e + 1.0); };  // int_T^inf tau^e, e < -1
    for (const auto& p : P)
        for (const auto& q : P) tail += p.coef * q.coef * upper(p.power + q.power + w);
    for (const auto& p : G)
        for (const auto& q : G) tail += kappa * p.coef * q.coef * upper(p.power + q.power + w - dim - 1.0);

    return detail::two_scheme_integral(series, w, phi, tail, T, tol);
}

inline ConstantResult constant_I(int dim, double alpha, double tol = 1e-8) {
    return constant_I(dim, SmoothnessOrder(alpha), tol);
}

// J_0(n) = int_0^inf |F(tau) - F(2 tau)|^2 dtau / tau.
inline ConstantResult constant_S0(int dim, double tol = 1e-8) {
    detail::check_dim(dim);
    detail::require(tol > 0.0, "constant_S0: tol must be positive");
    std::vector<detail::SeriesTerm> series;
    for (int j = 1; j <= 40; ++j) {
        double a = profile_coefficient(dim, j) * (1.0 - std::pow(4.0, j));
        series.push_back({2.0 * j, j % 2 ? -a : a});
    }
    const double T = 2000.0;
    double tail = profile_square_mean(dim) * (1.0 + std::pow(2.0, -dim - 1.0)) * std::pow(T, -dim - 1.0) / (dim + 1.0);
    return detail::two_scheme_integral(series, -1.0, [dim](double t) { return s0_multiplier(dim, t); }, tail, T, tol);
}

// Least-squares slope of log|Phi| against log tau on [tau_lo, tau_hi].
inline double deficit_slope(int dim, double alpha, double tau_lo = 1e-3, double tau_hi = 1e-2, int points = 21) {
    detail::require(0.0 < tau_lo && tau_lo < tau_hi && points >= 2, "deficit_slope: bad range");
    DeficitSpec phi(dim, alpha);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < points; ++i) {
        double x = std::log(tau_lo) + (std::log(tau_hi) - std::log(tau_lo)) * i / (points - 1);
        double y = std::log(std::abs(phi(std::exp(x))));
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    return (points * sxy - sx * sy) / (points * sxx - sx * sx);
}

}  // namespace sobolev
