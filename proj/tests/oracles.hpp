#pragma once

// Reference computations for the test suite. Everything here is written from first
// principles (marginal densities, Simpson sums, Monte-Carlo, finite differences)
// and shares no numerics with the library.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

constexpr double pi = std::numbers::pi;

// Composite Simpson rule with an even number of intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
    if (intervals % 2) ++intervals;
    double h = (b - a) / intervals, s = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

// Density of the first coordinate of a uniform point in the unit n-ball.
inline double marginal_density(int n, double s) {
    double u = 1.0 - s * s;
    if (u <= 0.0) return 0.0;
    switch (n) {
        case 1: return 0.5;
        case 2: return 2.0 / pi * std::sqrt(u);
        default: return 0.75 * u;
    }
}

// Integral of g(x_1) against the marginal, with s = sin(theta) to tame the edge.
inline double marginal_integral(int n, const std::function<double(double)>& g, int intervals = 200000) {
    return simpson(
        [&](double th) {
            double s = std::sin(th);
            return g(s) * marginal_density(n, s) * std::cos(th);
        },
        -pi / 2, pi / 2, intervals);
}

// Fourier transform of the normalized unit-ball indicator: mean of cos(tau x_1).
inline double ball_fourier(int n, double tau) {
    return marginal_integral(n, [&](double s) { return std::cos(tau * s); });
}

// Mean of x_1^{2j} over the unit ball.
inline double axial_moment(int n, int j) {
    return marginal_integral(n, [&](double s) { return std::pow(s, 2 * j); }, 20000);
}

// Mean of |x|^{2j} over the unit ball by the radial integral.
inline double radial_moment(int n, int j) {
    double num = simpson([&](double r) { return std::pow(r, 2 * j + n - 1); }, 0.0, 1.0, 20000);
    double den = simpson([&](double r) { return std::pow(r, n - 1); }, 0.0, 1.0, 20000);
    return num / den;
}

// Uniform point in the unit n-ball by rejection.
inline std::array<double, 3> ball_point(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        std::array<double, 3> x{0, 0, 0};
        double r2 = 0.0;
        for (int a = 0; a < n; ++a) {
            x[a] = u(rng);
            r2 += x[a] * x[a];
        }
        if (r2 < 1.0) return x;
    }
}

inline double monte_carlo_moment(int n, int j, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    double s = 0.0;
    for (int i = 0; i < samples; ++i) {
        auto x = ball_point(n, rng);
        double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        s += std::pow(r2, j);
    }
    return s / samples;
}

// Delta^j applied to f at x by nested central differences with step h.
inline double fd_laplacian_power(int n, const std::function<double(const double*)>& f, const double* x, int j, double h) {
    if (j == 0) return f(x);
    double c = fd_laplacian_power(n, f, x, j - 1, h), s = 0.0;
    for (int a = 0; a < n; ++a) {
        double xp[3] = {x[0], x[1], x[2]}, xm[3] = {x[0], x[1], x[2]};
        xp[a] += h;
        xm[a] -= h;
        s += fd_laplacian_power(n, f, xp, j - 1, h) - 2.0 * c + fd_laplacian_power(n, f, xm, j - 1, h);
    }
    return s / (h * h);
}

// Profile in closed form (n = 1, 3) or via the cylindrical Bessel function (n = 2).
// Only meant for tau away from zero.
inline double profile_closed(int n, double tau) {
    switch (n) {
        case 1: return std::sin(tau) / tau;
        case 2: return 2.0 * std::cyl_bessel_j(1.0, tau) / tau;
        default: return 3.0 * (std::sin(tau) - tau * std::cos(tau)) / (tau * tau * tau);
    }
}

// Taylor coefficients F(tau) = sum_j (-1)^j a_j tau^{2j}, a_j = mean(x_1^{2j}) / (2j)!.
inline std::vector<double> profile_taylor(int n, int terms) {
    std::vector<double> a;
    double fact = 1.0;
    for (int j = 0; j < terms; ++j) {
        if (j > 0) fact *= (2.0 * j - 1.0) * (2.0 * j);
        a.push_back(axial_moment(n, j) / fact);
    }
    return a;
}

// I(alpha, n) = int_0^inf |Phi(tau)|^2 tau^{-2 alpha - 1} d tau on a fine log grid:
// Taylor series on [0, tau0], Simpson in log tau on [tau0, T], and a tail in which the
// oscillating profile is replaced by its local mean square.
inline double constant_I_log_grid(int n, double alpha, double T = 4000.0) {
    int N = static_cast<int>(std::floor(alpha / 2.0));
    auto a = profile_taylor(n, N + 12);
    auto F = [&](double tau) {
        if (tau < 1.0) {
            double s = 0.0, p = 1.0;
            for (std::size_t j = 0; j < a.size(); ++j, p *= -tau * tau) s += a[j] * p;
            return s;
        }
        return profile_closed(n, tau);
    };
    auto poly = [&](double tau) {
        double s = 0.0, p = 1.0;
        for (int j = 0; j < N; ++j, p *= -tau * tau) s += a[j] * p;
        return s;
    };
    auto phi = [&](double tau) {
        double top = (N % 2 ? -1.0 : 1.0) * a[N] * std::pow(tau, 2 * N);
        return N == 0 ? F(tau) - 1.0 : F(tau) - poly(tau) - top * F(tau);
    };
    // Leading small-tau term of Phi: b tau^{2N+2}.
    double b = (N % 2 ? 1.0 : -1.0) * (a[N + 1] - (N >= 1 ? a[N] * a[1] : 0.0));
    double tau0 = 1e-2;
    double e = 4 * N + 4 - 2 * alpha;
    double head = b * b * std::pow(tau0, e) / e;
    double body = simpson(
        [&](double u) {
            double tau = std::exp(u), v = phi(tau);
            return v * v * std::pow(tau, -2.0 * alpha);
        },
        std::log(tau0), std::log(T), 400000);
    // Tail: |Phi|^2 ~ P(tau)^2 + (a_N tau^{2N})^2 <F^2> with <F^2> the mean square
    // envelope; cross terms oscillate and are dropped.
    double msq = n == 1 ? 0.5 : n == 2 ? 4.0 / pi : 4.5;
    double fpow = n == 1 ? -2.0 : n == 2 ? -3.0 : -4.0;
    auto tail_fn = [&](double u) {
        double tau = std::exp(u);
        double P = N == 0 ? -1.0 : poly(tau);
        double G = (N == 0 ? 1.0 : a[N] * std::pow(tau, 2 * N));
        return (P * P + G * G * msq * std::pow(tau, fpow)) * std::pow(tau, -2.0 * alpha);
    };
    double tail = simpson(tail_fn, std::log(T), std::log(T) + 40.0, 20000);
    return head + body + tail;
}

// Monte-Carlo estimate of int_{B(x,t)} y / |y|^{n+1} dy.
inline std::array<double, 3> monte_carlo_riesz(int n, const double* x, double t, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::array<double, 3> s{0, 0, 0};
    double vol = n == 1 ? 2.0 : n == 2 ? pi : 4.0 * pi / 3.0;
    vol *= std::pow(t, n);
    for (int i = 0; i < samples; ++i) {
        auto u = ball_point(n, rng);
        double y[3] = {0, 0, 0}, r2 = 0.0;
        for (int a = 0; a < n; ++a) {
            y[a] = x[a] + t * u[a];
            r2 += y[a] * y[a];
        }
        double w = std::pow(r2, -(n + 1) / 2.0);
        for (int a = 0; a < n; ++a) s[a] += y[a] * w;
    }
    for (double& v : s) v *= vol / samples;
    return s;
}

// Monte-Carlo measure of the symmetric difference of B(0,t) and B(d e_1, t).
inline double monte_carlo_symmetric_difference(int n, double d, double t, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double lo[3] = {-t, -t, -t}, hi[3] = {d + t, t, t};
    double box = 1.0;
    for (int a = 0; a < n; ++a) box *= hi[a] - lo[a];
    int hits = 0;
    for (int i = 0; i < samples; ++i) {
        double p[3] = {0, 0, 0}, r0 = 0.0, r1 = 0.0;
        for (int a = 0; a < n; ++a) {
            p[a] = lo[a] + (hi[a] - lo[a]) * u(rng);
            r0 += p[a] * p[a];
            double q = p[a] - (a == 0 ? d : 0.0);
            r1 += q * q;
        }
        if ((r0 < t * t) != (r1 < t * t)) ++hits;
    }
    return box * hits / samples;
}

// int I(x) exp(-|x|^2/2) dx for the kernel I with Fourier transform |xi|^{-alpha},
// 0 < alpha < n, computed on the Fourier side by Parseval.
inline double gaussian_pairing_spectral(int n, double alpha) {
    // Radial integral in Fourier space: area(S^{n-1}) int_0^inf r^{n-1-alpha} e^{-r^2/2} dr.
    double area = n == 1 ? 2.0 : n == 2 ? 2.0 * pi : 4.0 * pi;
    double radial = std::pow(2.0, (n - alpha) / 2.0 - 1.0) * std::tgamma((n - alpha) / 2.0);
    return area * radial / std::pow(2.0 * pi, n / 2.0);
}

}  // namespace oracle
