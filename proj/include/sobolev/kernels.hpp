#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "error.hpp"
#include "multiscale.hpp"
#include "order.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "radial.hpp"

namespace sobolev {

namespace detail {

inline double cos_angle(double r, double s, double t) {
    return std::clamp((r * r + s * s - t * t) / (2.0 * r * s), -1.0, 1.0);
}

// Measure of the part of the sphere |y| = r inside B(x, t), |x| = s.
inline double cap_measure(int dim, double r, double s, double t) {
    double g = cos_angle(r, s, t);
    switch (dim) {
        case 1: return 1.0;
        case 2: return 2.0 * r * std::acos(g);
        default: return 2.0 * std::numbers::pi * r * r * (1.0 - g);
    }
}

// Integral of y/|y| over that cap, along x/|x|.
inline double cap_axial_moment(int dim, double r, double s, double t) {
    double g = cos_angle(r, s, t);
    switch (dim) {
        case 1: return 1.0;
        case 2: return 2.0 * r * std::sqrt(std::max(0.0, 1.0 - g * g));
        default: return std::numbers::pi * r * r * (1.0 - g * g);
    }
}

}  // namespace detail

// coef * r^power * (log r)^log_power, log_power in {0, 1}.
struct RadialTerm {
    double coef = 0.0;
    double power = 0.0;
    int log_power = 0;
};

// Finite sum of power-log terms in |x|, closed under the radial Laplacian.
class RadialFunction {
public:
    RadialFunction() = default;
    RadialFunction(int dim, std::vector<RadialTerm> terms) : dim_(dim), terms_(std::move(terms)) { detail::check_dim(dim); }

    int dim() const { return dim_; }
    const std::vector<RadialTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    double operator()(double r) const {
        double v = 0.0;
        for (const auto& t : terms_) v += t.coef * std::pow(r, t.power) * (t.log_power ? std::log(r) : 1.0);
        return v;
    }

    // Pointwise Laplacian off the origin:
    //   Delta r^b         = b(b+n-2) r^{b-2}
    //   Delta r^b log r   = b(b+n-2) r^{b-2} log r + (2b+n-2) r^{b-2}
    RadialFunction laplacian() const {
        std::vector<RadialTerm> out;
        auto add = [&](double c, double p, int l) {
            if (c == 0.0) return;
            for (auto& o : out)
                if (o.log_power == l && std::abs(o.power - p) < 1e-12) {
                    o.coef += c;
                    return;
                }
            out.push_back({c, p, l});
        };
        for (const auto& t : terms_) {
            double b = t.power;
            add(t.coef * b * (b + dim_ - 2.0), b - 2.0, t.log_power);
            if (t.log_power) add(t.coef * (2.0 * b + dim_ - 2.0), b - 2.0, 0);
        }
        double scale = 0.0;
        for (const auto& o : out) scale = std::max(scale, std::abs(o.coef));
        std::erase_if(out, [&](const RadialTerm& o) { return std::abs(o.coef) <= 1e-14 * scale; });
        return RadialFunction(dim_, std::move(out));
    }

    bool locally_integrable() const {
        for (const auto& t : terms_)
            if (!(t.power + dim_ > 0.0)) return false;
        return true;
    }

    // Mean over the open ball B(x, t) with |x| = s.
    double ball_mean(double s, double t, double rel_tol = 1e-12) const {
        detail::require(t > 0.0 && s >= 0.0, "ball_mean: need t > 0 and |x| >= 0");
        detail::require(locally_integrable(), "ball_mean: function is not locally integrable");
        const double omega = sphere_area(dim_);
        double total = 0.0;
        // Sphere shells fully inside the ball: r < t - s.
        if (s < t) {
            double a = t - s;
            for (const auto& term : terms_) {
                double q = term.power + dim_;
                double base = omega * term.coef * std::pow(a, q) / q;
                total += term.log_power ? base * (std::log(a) - 1.0 / q) : base;
            }
        }
        if (s > 0.0) {
            double lo = std::abs(s - t), hi = s + t, mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            auto shell = [&](double theta) {
                double r = mid - half * std::cos(theta);
                if (r <= 0.0) return 0.0;
                return (*this)(r) * detail::cap_measure(dim_, r, s, t) * half * std::sin(theta);
            };
            auto q = integrate_adaptive(shell, 0.0, std::numbers::pi, rel_tol, rel_tol * std::abs(total), 4000);
            if (!q.converged && q.error > 1e-8 * std::max(std::abs(q.value), std::abs(total))) {
                // Cancelling integrand: judge the error against the integral of |shell|.
                auto m = integrate_adaptive([&](double th) { return std::abs(shell(th)); }, 0.0, std::numbers::pi, 1e-6, 0.0, 4000);
                if (q.error > 1e-10 * m.value)
                    throw convergence_error("ball_mean: shell quadrature did not converge", q.value, q.error);
            }
            total += q.value;
        }
        return total / (ball_volume(dim_) * std::pow(t, dim_));
    }

private:
    int dim_ = 1;
    std::vector<RadialTerm> terms_;

};


enum class SolutionForm { power, power_log };

// I(x) = c |x|^{alpha-n} or c |x|^{alpha-n} (A + B log|x|): Fourier transform |xi|^{-alpha}
// (modulo polynomials in the logarithmic case). Constants are calibrated at
// construction by pairing I with derivatives of Gaussians.
class FundamentalSolution {
public:
    FundamentalSolution(int dim, double alpha) : dim_(dim), alpha_(alpha) {
        detail::check_dim(dim);
        detail::require(std::isfinite(alpha) && alpha > 0.0, "fundamental_solution: alpha must be positive");
        double m = (alpha - dim) / 2.0;
        log_index_ = static_cast<int>(std::lround(m));
        form_ = (std::abs(m - log_index_) < 1e-12 && log_index_ >= 0) ? SolutionForm::power_log : SolutionForm::power;
        analytic_ = analytic_constant();
        double k1 = calibrate(1.0), k2 = calibrate(2.0);
        residual_ = std::max(std::abs(k1 - k2), std::abs(k1 - analytic_)) / std::abs(k1);
        if (!(residual_ <= 1e-3)) throw convergence_error("fundamental_solution: calibration failed", k1, residual_);
        if (form_ == SolutionForm::power) {
            c_ = k1;
            profile_ = RadialFunction(dim, {{c_, alpha - dim, 0}});
        } else {
            // |x|^{alpha-n} is then a polynomial; its coefficient A is immaterial.
            c_ = 1.0;
            A_ = 0.0;
            B_ = k1;
            profile_ = RadialFunction(dim, {{B_, alpha - dim, 1}});
        }
    }

    int dim() const { return dim_; }
    double alpha() const { return alpha_; }
    SolutionForm form() const { return form_; }
    double c() const { return c_; }
    double A() const { return A_; }
    double B() const { return B_; }
    double calibration_residual() const { return residual_; }
    double analytic() const { return analytic_; }
    const RadialFunction& profile() const { return profile_; }

    double radial(double r) const {
        detail::require(r > 0.0, "fundamental_solution: x must be nonzero");
        return profile_(r);
    }
    double operator()(const double* x) const {
        double r = 0.0;
        for (int a = 0; a < dim_; ++a) r += x[a] * x[a];
        return radial(std::sqrt(r));
    }

private:
    double analytic_constant() const {
        const double pi = std::numbers::pi;
        if (form_ == SolutionForm::power)
            return std::tgamma((dim_ - alpha_) / 2.0) /
                   (std::pow(2.0, alpha_) * std::pow(pi, dim_ / 2.0) * std::tgamma(alpha_ / 2.0));
        int m = log_index_;
        double sign = (m % 2 == 0) ? -1.0 : 1.0;
        return sign / (std::pow(2.0, alpha_ - 1.0) * std::pow(pi, dim_ / 2.0) * std::tgamma(alpha_ / 2.0) *
                       std::tgamma(m + 1.0));
    }

    // Constant k with k * phi paired against Delta^q G_sigma equal to the Fourier-side
    // pairing with |xi|^{-alpha}; phi is r^{alpha-n} or r^{alpha-n} log r.
    double calibrate(double sigma) const {
        const double pi = std::numbers::pi;
        const int n = dim_;
        int q = alpha_ < n ? 0 : static_cast<int>(std::floor((alpha_ - n) / 2.0)) + 1;
        double omega = sphere_area(n);
        // (2pi)^{-n} int |xi|^{-alpha} (-|xi|^2)^q (2 pi sigma^2)^{n/2} e^{-sigma^2 |xi|^2 / 2} dxi
        double a = 2.0 * q - alpha_ + n;
        double radial_int = std::tgamma(a / 2.0) / (2.0 * std::pow(sigma * sigma / 2.0, a / 2.0));
        double fourier = std::pow(2.0 * pi, -n) * (q % 2 ? -1.0 : 1.0) * std::pow(2.0 * pi * sigma * sigma, n / 2.0) *
                         omega * radial_int;

        // Delta^q exp(-|z|^2/2) = P(|z|^2) exp(-|z|^2/2), P by the recurrence
        // Delta(P e^{-s/2}) = [4s(P'' - P' + P/4) + 2n(P' - P/2)] e^{-s/2}.
        std::vector<double> P{1.0};
        for (int it = 0; it < q; ++it) {
            std::vector<double> d1(P.size(), 0.0), d2(P.size(), 0.0), nxt(P.size() + 1, 0.0);
            for (std::size_t i = 1; i < P.size(); ++i) d1[i - 1] = i * P[i];
            for (std::size_t i = 2; i < P.size(); ++i) d2[i - 2] = i * (i - 1.0) * P[i];
            for (std::size_t i = 0; i < P.size(); ++i) {
                nxt[i + 1] += 4.0 * (d2[i] - d1[i] + 0.25 * P[i]);
                nxt[i] += 2.0 * n * (d1[i] - 0.5 * P[i]);
            }
            P = nxt;
        }
        bool log_form = form_ == SolutionForm::power_log;
        auto integrand = [&](double r) {
            double z2 = r * r / (sigma * sigma), poly = 0.0;
            for (std::size_t i = P.size(); i-- > 0;) poly = poly * z2 + P[i];
            double phi = std::pow(r, alpha_ - n) * (log_form ? std::log(r) : 1.0);
            return std::pow(r, n - 1) * phi * std::pow(sigma, -2.0 * q) * poly * std::exp(-0.5 * z2);
        };
        // Near the origin integrate in u = -log(r / sigma).
        auto near = integrate_adaptive([&](double u) { double r = sigma * std::exp(-u); return integrand(r) * r; },
                                       0.0, 80.0, 1e-13, 0.0, 4000);
        auto far = integrate_adaptive(integrand, sigma, 14.0 * sigma, 1e-13, 0.0, 4000);
        double spatial = omega * (near.value + far.value);
        return fourier / spatial;
    }

    int dim_;
    double alpha_;
    SolutionForm form_;
    int log_index_ = 0;
    double c_ = 0.0, A_ = 0.0, B_ = 0.0;
    double residual_ = 0.0;
    double analytic_ = 0.0;
    RadialFunction profile_;
};

inline double fundamental_solution(int dim, double alpha, const double* x) {
    return FundamentalSolution(dim, alpha)(x);
}

enum class KernelPiece {
    full,    // K_t
    smooth,  // H_t: K_t without the top term
    top      // -c_N t^{2N} (Delta^N I)_{B(x,t)}
};

// K_t(x) = (I)_{B(x,t)} - sum_{j<N} c_j t^{2j} Delta^j I(x) - c_N t^{2N} (Delta^N I)_{B(x,t)}
// for N >= 1, and K_t = (I)_{B(x,t)} - I(x) for N = 0; c_j = M_j / L_j.
class Kernel {
public:
    Kernel(int dim, double alpha) : order_(alpha), solution_(dim, alpha) {
        const int N = order_.N();
        lap_.push_back(solution_.profile());
        for (int j = 1; j <= N + series_terms; ++j) lap_.push_back(lap_.back().laplacian());
        for (int j = 0; j <= N + series_terms; ++j) c_.push_back(profile_coefficient(dim, j));
        dirac_ = order_.even_integer() && N >= 1;
    }

    int dim() const { return solution_.dim(); }
    double alpha() const { return order_.alpha(); }
    int N() const { return order_.N(); }
    const FundamentalSolution& solution() const { return solution_; }
    // Delta^j I off the origin.
    const RadialFunction& laplacian(int j) const { return lap_.at(j); }

    double operator()(double r, double t, KernelPiece piece = KernelPiece::full) const {
        detail::require(r > 0.0 && t > 0.0, "kernel_K: need x != 0 and t > 0");
        const int N = order_.N();
        if (N == 0 && piece == KernelPiece::top) return 0.0;
        if (N == 0) piece = KernelPiece::full;
        if (t <= r / 3.0) return series(r, t, piece);

        double top = 0.0;
        if (N >= 1 && piece != KernelPiece::smooth) {
            double mean = dirac_ ? ((N % 2 ? -1.0 : 1.0) * (r < t ? 1.0 : 0.0) / (ball_volume(dim()) * std::pow(t, dim())))
                                 : lap_[N].ball_mean(r, t);
            top = -c_[N] * std::pow(t, 2 * N) * mean;
        }
        if (piece == KernelPiece::top) return top;
        double smooth = lap_[0].ball_mean(r, t);
        for (int j = 0; j < N; ++j) smooth -= c_[j] * std::pow(t, 2 * j) * lap_[j](r);
        if (N == 0) smooth -= lap_[0](r);
        return piece == KernelPiece::smooth ? smooth : smooth + top;
    }

    double operator()(const double* x, double t, KernelPiece piece = KernelPiece::full) const {
        double r = 0.0;
        for (int a = 0; a < dim(); ++a) r += x[a] * x[a];
        return (*this)(std::sqrt(r), t, piece);
    }

private:
    static constexpr int series_terms = 30;

    // t^{2j} Delta^j I(r), written as coef r^{b0} (log r)^l (t/r)^{2j} to avoid overflow.
    double scaled_laplacian(int j, double r, double t) const {
        double ratio = std::pow(t / r, 2 * j), lr = std::log(r), v = 0.0;
        for (const auto& term : lap_[j].terms())
            v += term.coef * std::pow(r, term.power + 2.0 * j) * (term.log_power ? lr : 1.0);
        return v * ratio;
    }

    // Mean-value expansion (Delta^m phi)_{B(x,t)} = sum_i c_i t^{2i} Delta^{m+i} phi(x), valid for t < |x|.
    double series(double r, double t, KernelPiece piece) const {
        const int N = order_.N();
        double sum = 0.0;
        int quiet = 0;
        for (int m = (N == 0 ? 1 : 0); m <= series_terms; ++m) {
            double coef;
            if (piece == KernelPiece::smooth) coef = c_[N + m];
            else if (piece == KernelPiece::top) coef = -c_[N] * c_[m];
            else coef = c_[N + m] - (N >= 1 ? c_[N] * c_[m] : 0.0);
            double term = coef * scaled_laplacian(N + m, r, t);
            sum += term;
            if (lap_[N + m].is_zero()) break;
            quiet = std::abs(term) <= 1e-17 * std::abs(sum) ? quiet + 1 : 0;
            if (quiet >= 2) break;
        }
        return sum;
    }

    SmoothnessOrder order_;
    FundamentalSolution solution_;
    std::vector<RadialFunction> lap_;
    std::vector<double> c_;
    bool dirac_ = false;
};

inline double kernel_K(int dim, double alpha, const double* x, double t, KernelPiece piece = KernelPiece::full) {
    return Kernel(dim, alpha)(x, t, piece);
}

// (I * chi_t)(x) - I(x) for N = 0, integrating I over B(x, t) in polar coordinates
// about the ball centre. Independent of the origin-centred shell path of Kernel.
inline double kernel_K_first_order(const FundamentalSolution& I, double s, double t) {
    detail::require(I.alpha() < 2.0, "kernel_K_first_order: requires 0 < alpha < 2");
    detail::require(s > 0.0 && t > 0.0, "kernel_K_first_order: need x != 0 and t > 0");
    const int n = I.dim();
    const double pi = std::numbers::pi;
    auto phi = [&](double r) { return r > 0.0 ? I.radial(r) : 0.0; };
    const double beta = I.alpha() - n;
    // Integral of I over the sphere |y - x| = rho; d = |s - rho| is passed separately so
    // it keeps full precision near rho = s.
    auto sphere_sum = [&](double rho, double d) {
        if (n == 1) return phi(s + rho) + phi(d);
        if (n == 3) {
            // 2 pi rho / s * int_{|s-rho|}^{s+rho} r phi(r) dr, phi = c r^beta
            double lo = d, hi = s + rho, e = beta + 2.0;
            double prim = std::abs(e) < 1e-14 ? std::log(hi / lo) : (std::pow(hi, e) - std::pow(lo, e)) / e;
            return 2.0 * pi * rho / s * I.c() * prim;
        }
        // Circle |y - x| = rho: angle psi from the direction of the origin. Near psi = 0,
        // sin(psi/2) = a sinh(v) with r = |s - rho| cosh(v) resolves the near-singularity.
        double a = d / (2.0 * std::sqrt(s * rho));
        double vmax = std::asinh(std::sin(pi / 4.0) / a);
        auto near = [&](double v) {
            double sh = a * std::sinh(v);
            return phi(d * std::cosh(v)) * 2.0 * a * std::cosh(v) / std::sqrt(1.0 - sh * sh);
        };
        auto far = [&](double th) {
            double r = std::sqrt(s * s + rho * rho + 2.0 * s * rho * std::cos(th));
            return phi(r);
        };
        return 2.0 * rho * (integrate_adaptive(near, 0.0, vmax, 1e-13, 0.0, 400).value +
                            integrate_adaptive(far, 0.0, pi / 2.0, 1e-13, 0.0, 400).value);
    };
    // Outer integral in rho; the integrable singularity at rho = s is removed by rho = s -+ w^3.
    double total = 0.0;
    auto cubic = [&](double lo, double hi, double sign) {
        auto g = [&](double w) { return sphere_sum(s + sign * w * w * w, w * w * w) * 3.0 * w * w; };
        return integrate_adaptive(g, lo, hi, 1e-13, 0.0, 400).value;
    };
    if (s < t) {
        total += cubic(0.0, std::cbrt(s), -1.0);
        total += cubic(0.0, std::cbrt(t - s), 1.0);
    } else {
        total += integrate_adaptive([&](double rho) { return sphere_sum(rho, s - rho); }, 0.0, t, 1e-13, 0.0, 400).value;
    }
    return total / (ball_volume(n) * std::pow(t, n)) - phi(s);
}

// Principal value of int_{B(x,t)} y / |y|^{n+1} dy. Shells |y| < |t - |x|| are
// symmetric and cancel; the remainder is along x/|x|.
inline std::vector<double> pv_ball_riesz(int dim, const double* x, double t) {
    detail::check_dim(dim);
    detail::require(t > 0.0, "pv_ball_riesz: t must be positive");
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += x[a] * x[a];
    s = std::sqrt(s);
    std::vector<double> out(dim, 0.0);
    if (s == 0.0) return out;
    detail::require(std::abs(s - t) > 1e-9 * t, "pv_ball_riesz: |x| = t is the singular sphere");
    double lo = std::abs(s - t), hi = s + t, mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    auto f = [&](double theta) {
        double r = mid - half * std::cos(theta);
        return std::pow(r, -dim) * detail::cap_axial_moment(dim, r, s, t) * half * std::sin(theta);
    };
    double axial = integrate_adaptive(f, 0.0, std::numbers::pi, 1e-12, 0.0, 4000).value;
    for (int a = 0; a < dim; ++a) out[a] = axial * x[a] / s;
    return out;
}

// Measure of the symmetric difference of two radius-t balls with centres d apart.
inline double symmetric_difference_measure(int dim, double d, double t) {
    detail::check_dim(dim);
    detail::require(d >= 0.0 && t > 0.0, "symmetric_difference_measure: need d >= 0, t > 0");
    double vol = ball_volume(dim) * std::pow(t, dim);
    if (d >= 2.0 * t) return 2.0 * vol;
    double lens;
    switch (dim) {
        case 1: lens = 2.0 * t - d; break;
        case 2: lens = 2.0 * t * t * std::acos(d / (2.0 * t)) - 0.5 * d * std::sqrt(4.0 * t * t - d * d); break;
        default: lens = std::numbers::pi * (4.0 * t + d) * (2.0 * t - d) * (2.0 * t - d) / 12.0;
    }
    return 2.0 * (vol - lens);
}

// Hoelder exponent gamma of the kernel-difference bound |y|^gamma / |x|^{n+gamma}.
inline double hormander_gamma(int dim, double alpha) {
    SmoothnessOrder o(alpha);
    const int N = o.N();
    if (N == 0) return alpha >= 1.0 ? 1.0 : alpha / dim;
    double top;
    if (o.even_integer()) top = 0.5;
    else if (dim == 1 && alpha == 2.0 * N + 1.0) top = 0.5;
    else top = (alpha - 2.0 * N) / dim;
    return std::min(1.0, top);
}

// Log-t Gauss quadrature adapted to a pair (x, x - y): panel edges where the ball
// boundary crosses the origin and at the series/shell switch.
inline ScaleQuadrature hormander_quadrature(double x_norm, double xy_norm, int refinement = 1) {
    detail::require(refinement >= 1, "hormander_quadrature: refinement must be positive");
    std::vector<double> br{x_norm / 3.0, xy_norm / 3.0, x_norm, xy_norm, 2.0 * x_norm};
    return make_scale_quadrature_panels(1e-4 * x_norm, 1e4 * x_norm, br, 0.5 / refinement, 8);
}

// (sum_k w_k t_k^{-2 alpha} |K_{t_k}(x - y) - K_{t_k}(x)|^2)^{1/2}
inline double hormander_norm(const Kernel& K, const double* x, const double* y, const ScaleQuadrature& quad,
                             KernelPiece piece = KernelPiece::full) {
    const int n = K.dim();
    double rx = 0.0, ry = 0.0, rxy = 0.0;
    for (int a = 0; a < n; ++a) {
        rx += x[a] * x[a];
        ry += y[a] * y[a];
        rxy += (x[a] - y[a]) * (x[a] - y[a]);
    }
    rx = std::sqrt(rx), ry = std::sqrt(ry), rxy = std::sqrt(rxy);
    detail::require(rx >= 2.0 * ry * (1.0 - 1e-12), "hormander_norm: need |x| >= 2|y|");
    if (ry == 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t k = 0; k < quad.size(); ++k) {
        double t = quad.nodes[k];
        double d = K(rxy, t, piece) - K(rx, t, piece);
        s += quad.weights[k] * std::pow(t, -2.0 * K.alpha()) * d * d;
    }
    return std::sqrt(s);
}

inline double hormander_norm(int dim, double alpha, const double* x, const double* y, const ScaleQuadrature& quad) {
    return hormander_norm(Kernel(dim, alpha), x, y, quad);
}

struct HormanderSample {
    std::array<double, 3> x{};
    std::array<double, 3> y{};
    double norm = 0.0;
    double bound = 0.0;  // |y|^gamma / |x|^{n+gamma}
    double ratio = 0.0;
    bool ascent = false;  // produced by local ascent rather than random sampling
};

struct HormanderReport {
    double alpha = 0.0;
    int dim = 0;
    double gamma = 0.0;
    std::uint64_t seed = 0;
    int refinement = 1;
    std::vector<HormanderSample> samples;
    double sup_ratio = 0.0;     // over all samples
    double median_ratio = 0.0;  // over the random samples
};

namespace detail {
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline std::array<double, 3> random_direction(int dim, std::mt19937_64& rng) {
    std::array<double, 3> v{};
    double u = uniform01(rng), w = uniform01(rng);
    if (dim == 1) v[0] = u < 0.5 ? -1.0 : 1.0;
    else if (dim == 2) v[0] = std::cos(2.0 * std::numbers::pi * u), v[1] = std::sin(2.0 * std::numbers::pi * u);
    else {
        double z = 2.0 * u - 1.0, rho = std::sqrt(std::max(0.0, 1.0 - z * z)), ph = 2.0 * std::numbers::pi * w;
        v = {rho * std::cos(ph), rho * std::sin(ph), z};
    }
    return v;
}
}  // namespace detail

namespace detail {

inline void evaluate_sample(const Kernel& K, double gamma, int refinement, HormanderSample& smp) {
    const int dim = K.dim();
    double rx = 0.0, ry = 0.0, rxy = 0.0;
    for (int a = 0; a < dim; ++a) {
        rx += smp.x[a] * smp.x[a];
        ry += smp.y[a] * smp.y[a];
        rxy += (smp.x[a] - smp.y[a]) * (smp.x[a] - smp.y[a]);
    }
    rx = std::sqrt(rx), ry = std::sqrt(ry), rxy = std::sqrt(rxy);
    smp.norm = hormander_norm(K, smp.x.data(), smp.y.data(), hormander_quadrature(rx, rxy, refinement));
    smp.bound = std::pow(ry, gamma) / std::pow(rx, dim + gamma);
    smp.ratio = smp.norm / smp.bound;
}

// Pattern search over u = log(|y|/|x|) and the angle between x and y, holding x and
// the plane of (x, y) fixed. Every evaluated pair is appended to `trail`.
inline void local_ascent(const Kernel& K, double gamma, int refinement, const HormanderSample& start,
                         std::vector<HormanderSample>& trail) {
    const int dim = K.dim();
    double rx = 0.0, ry = 0.0, dot = 0.0;
    for (int a = 0; a < dim; ++a) {
        rx += start.x[a] * start.x[a];
        ry += start.y[a] * start.y[a];
        dot += start.x[a] * start.y[a];
    }
    rx = std::sqrt(rx), ry = std::sqrt(ry);
    std::array<double, 3> ex{}, ep{};
    for (int a = 0; a < dim; ++a) ex[a] = start.x[a] / rx;
    double perp = 0.0;
    for (int a = 0; a < dim; ++a) {
        ep[a] = start.y[a] - dot / rx * ex[a];
        perp += ep[a] * ep[a];
    }
    perp = std::sqrt(perp);
    bool planar = dim > 1 && perp > 1e-12 * ry;
    if (planar)
        for (int a = 0; a < dim; ++a) ep[a] /= perp;
    const double umin = std::log(1e-4), umax = std::log(0.5);
    auto make = [&](double u, double th) {
        HormanderSample s;
        s.x = start.x;
        double q = std::exp(u) * rx;
        for (int a = 0; a < dim; ++a) s.y[a] = q * (std::cos(th) * ex[a] + (planar ? std::sin(th) * ep[a] : 0.0));
        s.ascent = true;
        evaluate_sample(K, gamma, refinement, s);
        trail.push_back(s);
        return s.ratio;
    };
    double u = std::log(ry / rx), th = std::acos(std::clamp(dot / (rx * ry), -1.0, 1.0));
    double best = start.ratio, du = 0.5, dth = planar ? 0.5 : 0.0;
    for (int it = 0; it < 200 && (du > 1e-3 || dth > 1e-3); ++it) {
        bool improved = false;
        for (int dir = 0; dir < 4 && !improved; ++dir) {
            double nu = u, nt = th;
            if (dir < 2) nu = std::clamp(u + (dir ? -du : du), umin, umax);
            else if (planar) nt = std::clamp(th + (dir == 3 ? -dth : dth), 0.0, std::numbers::pi);
            else continue;
            if (nu == u && nt == th) continue;
            double v = make(nu, nt);
            if (v > best) best = v, u = nu, th = nt, improved = true;
        }
        if (!improved) du *= 0.5, dth *= 0.5;
    }
}

}  // namespace detail

// Samples |x| log-uniformly in [1e-2, 1e2] and |y|/|x| log-uniformly in [1e-4, 1/2]
// with uniform directions, then climbs from the `ascents` largest ratios by local
// pattern search. `scale` multiplies every sampled pair.
inline HormanderReport hormander_scan(int dim, double alpha, int num_samples, std::uint64_t seed, int refinement = 1,
                                      double scale = 1.0, int ascents = 4) {
    detail::require(num_samples >= 100, "hormander_scan: need at least 100 samples");
    detail::require(scale > 0.0, "hormander_scan: scale must be positive");
    Kernel K(dim, alpha);
    HormanderReport rep;
    rep.alpha = alpha;
    rep.dim = dim;
    rep.gamma = hormander_gamma(dim, alpha);
    rep.seed = seed;
    rep.refinement = refinement;
    rep.samples.resize(num_samples);
    std::mt19937_64 rng(seed);
    for (auto& smp : rep.samples) {
        double rx = std::exp(std::log(1e-2) + (std::log(1e2) - std::log(1e-2)) * detail::uniform01(rng));
        double q = std::exp(std::log(1e-4) + (std::log(0.5) - std::log(1e-4)) * detail::uniform01(rng));
        auto dx = detail::random_direction(dim, rng), dy = detail::random_direction(dim, rng);
        for (int a = 0; a < dim; ++a) {
            smp.x[a] = scale * rx * dx[a];
            smp.y[a] = scale * rx * q * dy[a];
        }
    }
    parallel_for(rep.samples.size(), [&](std::size_t i) { detail::evaluate_sample(K, rep.gamma, refinement, rep.samples[i]); });

    std::vector<double> r;
    for (const auto& smp : rep.samples) r.push_back(smp.ratio);
    std::sort(r.begin(), r.end());
    rep.median_ratio = r.size() % 2 ? r[r.size() / 2] : 0.5 * (r[r.size() / 2 - 1] + r[r.size() / 2]);

    std::vector<std::size_t> order(rep.samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return rep.samples[a].ratio > rep.samples[b].ratio; });
    std::size_t starts = std::min<std::size_t>(std::max(ascents, 0), order.size());
    std::vector<std::vector<HormanderSample>> trails(starts);
    parallel_for(starts, [&](std::size_t i) {
        detail::local_ascent(K, rep.gamma, refinement, rep.samples[order[i]], trails[i]);
    });
    for (auto& t : trails) rep.samples.insert(rep.samples.end(), t.begin(), t.end());
    for (const auto& smp : rep.samples) rep.sup_ratio = std::max(rep.sup_ratio, smp.ratio);
    return rep;
}

}  // namespace sobolev
