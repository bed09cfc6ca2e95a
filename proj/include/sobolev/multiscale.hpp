#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "constants.hpp"
#include "error.hpp"
#include "fields.hpp"
#include "order.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "radial.hpp"

namespace sobolev {

// Nodes and weights approximating int f(t) dt/t over [t_min, t_max].
struct ScaleQuadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
    double t_min = 0.0;
    double t_max = 0.0;

    std::size_t size() const { return nodes.size(); }
    double weight_sum() const {
        double s = 0.0;
        for (double w : weights) s += w;
        return s;
    }
};

// Geometric midpoint rule in u = log t: K equal cells, node at each cell centre.
inline ScaleQuadrature make_scale_quadrature(double t_min, double t_max, int K) {
    detail::require(std::isfinite(t_min) && std::isfinite(t_max) && 0.0 < t_min && t_min < t_max,
                    "make_scale_quadrature: need 0 < t_min < t_max");
    detail::require(K >= 8, "make_scale_quadrature: K must be at least 8");
    ScaleQuadrature q;
    q.t_min = t_min;
    q.t_max = t_max;
    double u0 = std::log(t_min), du = (std::log(t_max) - u0) / K;
    for (int k = 0; k < K; ++k) {
        q.nodes.push_back(std::exp(u0 + (k + 0.5) * du));
        q.weights.push_back(du);
    }
    return q;
}

// Composite Gauss-Legendre in log t with panel edges at the given breakpoints and
// panels no wider than max_log_width.
inline ScaleQuadrature make_scale_quadrature_panels(double t_min, double t_max, std::vector<double> breakpoints,
                                                    double max_log_width = 0.5, int order = 8) {
    detail::require(std::isfinite(t_min) && std::isfinite(t_max) && 0.0 < t_min && t_min < t_max,
                    "make_scale_quadrature_panels: need 0 < t_min < t_max");
    detail::require(max_log_width > 0.0 && order >= 1, "make_scale_quadrature_panels: bad panel parameters");
    std::vector<double> edges{std::log(t_min), std::log(t_max)};
    for (double b : breakpoints)
        if (b > t_min && b < t_max) edges.push_back(std::log(b));
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                edges.end());
    const GaussRule& r = gauss_legendre(order);
    ScaleQuadrature q;
    q.t_min = t_min;
    q.t_max = t_max;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        int pieces = std::max(1, static_cast<int>(std::ceil((edges[e + 1] - edges[e]) / max_log_width)));
        double width = (edges[e + 1] - edges[e]) / pieces;
        for (int p = 0; p < pieces; ++p) {
            double c = edges[e] + (p + 0.5) * width;
            for (int i = 0; i < order; ++i) {
                q.nodes.push_back(std::exp(c + 0.5 * width * r.nodes[i]));
                q.weights.push_back(0.5 * width * r.weights[i]);
            }
        }
    }
    return q;
}

enum class BallMode { spectral, direct };

// Smallest and largest nonzero |xi| carrying a coefficient above rel_threshold * max.
struct SpectralSupport {
    double xi_min = 0.0;
    double xi_max = 0.0;
    bool empty = true;
};

inline SpectralSupport spectral_support(const SpectralField& s, double rel_threshold = 1e-10) {
    double cmax = 0.0;
    for (std::size_t i = 0; i < s.coeffs.size(); ++i)
        if (s.freq_mag[i] > 0.0) cmax = std::max(cmax, std::abs(s.coeffs[i]));
    SpectralSupport out;
    if (cmax == 0.0) return out;
    out.xi_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
        if (s.freq_mag[i] > 0.0 && std::abs(s.coeffs[i]) > rel_threshold * cmax) {
            out.xi_min = std::min(out.xi_min, s.freq_mag[i]);
            out.xi_max = std::max(out.xi_max, s.freq_mag[i]);
        }
    }
    out.empty = false;
    return out;
}

inline SpectralSupport spectral_support(const ScalarField& f, double rel_threshold = 1e-10) {
    return spectral_support(forward_spectrum(f), rel_threshold);
}

// Scale range [lo / xi_max, hi / xi_min] resolving both tau -> 0 and tau -> infinity.
// Constant fields fall back to the grid scales.
inline ScaleQuadrature default_scale_quadrature(const ScalarField& f, int K = 512, double lo = 1e-3, double hi = 1e3) {
    auto sup = spectral_support(f);
    if (sup.empty) {
        double h = *std::min_element(f.grid.spacing().begin(), f.grid.spacing().end());
        return make_scale_quadrature(h, 0.25 * f.grid.min_period(), K);
    }
    return make_scale_quadrature(lo / sup.xi_max, hi / sup.xi_min, K);
}

namespace detail {

// Distinct |xi| values of a grid with the slot -> value map.
struct RadialIndex {
    std::vector<double> values;
    std::vector<std::uint32_t> slot;
};

inline RadialIndex radial_index(const std::vector<double>& mag) {
    std::vector<std::uint32_t> order(mag.size());
    for (std::size_t i = 0; i < mag.size(); ++i) order[i] = static_cast<std::uint32_t>(i);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return mag[a] < mag[b] || (mag[a] == mag[b] && a < b); });
    RadialIndex r;
    r.slot.resize(mag.size());
    for (auto i : order) {
        if (r.values.empty() || mag[i] > r.values.back() * (1.0 + 1e-12)) r.values.push_back(mag[i]);
        r.slot[i] = static_cast<std::uint32_t>(r.values.size() - 1);
    }
    return r;
}

template <class Fn>
ScalarField apply_radial(const SpectralField& s, Fn&& mult) {
    SpectralField out = s;
    auto idx = radial_index(s.freq_mag);
    std::vector<double> m(idx.values.size());
    for (std::size_t u = 0; u < m.size(); ++u) m[u] = mult(idx.values[u]);
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] *= m[idx.slot[i]];
    return inverse_spectrum(out);
}

// Integer offsets of a ball stencil sorted by distance, with per-radius counts
// under the center-in-ball rule |offset| < t.
struct Stencil {
    std::vector<std::array<int, 3>> offsets;
    std::vector<double> dist2;
    std::vector<std::size_t> count;  // per requested radius
};

inline Stencil make_stencil(const GridSpec& g, const std::vector<double>& radii) {
    Stencil s;
    double rmax = *std::max_element(radii.begin(), radii.end());
    int ext[3] = {0, 0, 0};
    for (int a = 0; a < g.dim(); ++a) ext[a] = static_cast<int>(std::floor(rmax / g.spacing()[a]));
    struct Entry {
        double d2;
        std::array<int, 3> o;
    };
    std::vector<Entry> entries;
    for (int i = -ext[0]; i <= ext[0]; ++i)
        for (int j = -ext[1]; j <= ext[1]; ++j)
            for (int k = -ext[2]; k <= ext[2]; ++k) {
                std::array<int, 3> o{i, j, k};
                double d2 = 0.0;
                for (int a = 0; a < g.dim(); ++a) d2 += (o[a] * g.spacing()[a]) * (o[a] * g.spacing()[a]);
                if (d2 < rmax * rmax) entries.push_back({d2, o});
            }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.d2 < b.d2 || (a.d2 == b.d2 && a.o < b.o);
    });
    for (const auto& e : entries) {
        s.offsets.push_back(e.o);
        s.dist2.push_back(e.d2);
    }
    for (double r : radii)
        s.count.push_back(std::lower_bound(s.dist2.begin(), s.dist2.end(), r * r) - s.dist2.begin());
    return s;
}

inline void check_direct_radius(const GridSpec& g, double t) {
    require(t < 0.5 * g.min_period(), "direct ball mean: radius must be below half the smallest period");
}

// Flat neighbour index of point idx shifted by offset o.
inline std::size_t shifted(const GridSpec& g, const int* idx, const std::array<int, 3>& o) {
    int s[3];
    for (int a = 0; a < g.dim(); ++a) s[a] = idx[a] + o[a];
    return g.ravel(s);
}

}  // namespace detail

// Mean of f over the open ball B(x, t) at every grid node.
inline ScalarField ball_mean(const ScalarField& field, double t, BallMode mode = BallMode::spectral) {
    detail::require(std::isfinite(t) && t > 0.0, "ball_mean: t must be positive");
    const int dim = field.grid.dim();
    if (mode == BallMode::spectral)
        return detail::apply_radial(forward_spectrum(field), [&](double xi) { return ball_profile(dim, t * xi); });
    detail::check_direct_radius(field.grid, t);
    auto st = detail::make_stencil(field.grid, {t});
    const GridSpec& g = field.grid;
    ScalarField out(g);
    std::size_t n = st.count[0];
    parallel_for(g.total(), [&](std::size_t i) {
        int idx[3];
        g.unravel(i, idx);
        double s = 0.0;
        for (std::size_t m = 0; m < n; ++m) s += field.values[detail::shifted(g, idx, st.offsets[m])];
        out.values[i] = s / static_cast<double>(n);
    });
    return out;
}

// (-Delta)^{alpha/2}: multiplier |xi|^alpha.
inline ScalarField frac_laplacian(const ScalarField& field, double alpha) {
    detail::require(std::isfinite(alpha) && alpha > 0.0, "frac_laplacian: alpha must be positive");
    return detail::apply_radial(forward_spectrum(field), [&](double xi) { return xi == 0.0 ? 0.0 : std::pow(xi, alpha); });
}

// Delta^j: multiplier (-|xi|^2)^j.
inline ScalarField laplacian_power(const ScalarField& field, int j) {
    detail::require(j >= 0, "laplacian_power: j must be non-negative");
    return detail::apply_radial(forward_spectrum(field), [&](double xi) { return std::pow(-xi * xi, j); });
}

// g_j = Delta^j f / L_j for j = 1..N.
inline std::vector<ScalarField> auto_corrections(const ScalarField& field, int N) {
    std::vector<ScalarField> gs;
    auto spec = forward_spectrum(field);
    for (int j = 1; j <= N; ++j) {
        double L = laplacian_power_L(field.grid.dim(), j).value();
        gs.push_back(detail::apply_radial(spec, [&](double xi) { return std::pow(-xi * xi, j) / L; }));
    }
    return gs;
}

// Correction functions g_1..g_N, either given or derived from f.
struct Corrections {
    bool automatic = true;
    std::vector<ScalarField> fields;

    static Corrections Auto() { return {}; }
    static Corrections Given(std::vector<ScalarField> gs) { return {false, std::move(gs)}; }
};

struct SquareFunctionResult {
    ScalarField values;
    bool truncation_warning = false;
    double t_min = 0.0;
    double t_max = 0.0;
    std::size_t scales = 0;
};

namespace detail {

inline constexpr std::size_t scale_block = 16;

inline bool truncation_flag(const ScalarField& f, const ScaleQuadrature& q) {
    auto sup = spectral_support(f);
    if (sup.empty) return false;
    return q.t_min * sup.xi_max > 1e-2 || q.t_max * sup.xi_min < 1e2;
}

inline void check_quadrature(const ScaleQuadrature& q) {
    require(!q.nodes.empty() && q.nodes.size() == q.weights.size(), "scale quadrature is empty or inconsistent");
    for (std::size_t k = 0; k < q.nodes.size(); ++k)
        require(q.nodes[k] > 0.0 && std::isfinite(q.nodes[k]) && q.weights[k] >= 0.0, "invalid scale quadrature node");
}

// sqrt(sum_k w_k t_k^{-2 alpha} |A_k|^2) where A_k = inverse(mult_k * spectrum); the
// multiplier callback fills per-|xi| values for scale k. Blocks of scales are
// reduced in a fixed order so the result is independent of the thread count.
template <class MultFn>
ScalarField spectral_square_sum(const SpectralField& spec, const ScaleQuadrature& q, double alpha, MultFn&& fill) {
    const GridSpec& g = spec.grid;
    auto idx = radial_index(spec.freq_mag);
    std::size_t K = q.size(), nblocks = (K + scale_block - 1) / scale_block;
    std::vector<std::vector<double>> partial(nblocks);
    parallel_for(nblocks, [&](std::size_t b) {
        std::vector<double> acc(g.total(), 0.0);
        std::vector<std::complex<double>> m(idx.values.size());
        SpectralField work = spec;
        for (std::size_t k = b * scale_block; k < std::min(K, (b + 1) * scale_block); ++k) {
            fill(k, idx.values, m);
            for (std::size_t i = 0; i < g.total(); ++i) work.coeffs[i] = m[idx.slot[i]] * spec.coeffs[i];
            auto A = inverse_spectrum(work);
            double wt = q.weights[k] * std::pow(q.nodes[k], -2.0 * alpha);
            for (std::size_t i = 0; i < g.total(); ++i) acc[i] += wt * A.values[i] * A.values[i];
        }
        partial[b] = std::move(acc);
    });
    ScalarField out(g);
    for (const auto& p : partial)
        for (std::size_t i = 0; i < g.total(); ++i) out.values[i] += p[i];
    for (double& v : out.values) v = std::sqrt(v);
    return out;
}

}  // namespace detail

// S_alpha(f, g_1..g_N)(x) = sqrt(sum_k w_k t_k^{-2 alpha} |mean_{B(x,t_k)} R_N(., x)|^2) with
// R_N(y,x) = f(y) - f(x) - sum_{j<N} g_j(x)|y-x|^{2j} - (g_N)_{B(x,t)} |y-x|^{2N}.
inline SquareFunctionResult square_function(const ScalarField& field, const Corrections& gs,
                                            const SmoothnessOrder& order, const ScaleQuadrature& quad,
                                            BallMode mode = BallMode::spectral) {
    field.validate();
    detail::check_quadrature(quad);
    const GridSpec& g = field.grid;
    const int dim = g.dim(), N = order.N();
    const double alpha = order.alpha();
    if (!gs.automatic) {
        detail::require(gs.fields.size() == std::size_t(N), "square_function: expected exactly N correction fields");
        for (const auto& c : gs.fields) {
            detail::require(c.grid == g, "square_function: correction field grid mismatch");
            c.validate();
        }
    }
    SquareFunctionResult res;
    res.t_min = quad.t_min;
    res.t_max = quad.t_max;
    res.scales = quad.size();
    res.truncation_warning = detail::truncation_flag(field, quad);

    std::vector<double> M(N + 1);
    for (int j = 0; j <= N; ++j) M[j] = moment_M(dim, j).value();

    if (mode == BallMode::spectral) {
        auto fhat = forward_spectrum(field);
        if (gs.automatic) {
            DeficitSpec phi(dim, order);
            res.values = detail::spectral_square_sum(fhat, quad, alpha, [&](std::size_t k, const auto& xi, auto& m) {
                for (std::size_t u = 0; u < xi.size(); ++u) m[u] = phi(quad.nodes[k] * xi[u]);
            });
            return res;
        }
        // Stack f and g_j spectra; the combined multiplier acts slot by slot.
        std::vector<SpectralField> ghat;
        for (const auto& c : gs.fields) ghat.push_back(forward_spectrum(c));
        auto idx = detail::radial_index(fhat.freq_mag);
        std::size_t K = quad.size(), nblocks = (K + detail::scale_block - 1) / detail::scale_block;
        std::vector<std::vector<double>> partial(nblocks);
        parallel_for(nblocks, [&](std::size_t b) {
            std::vector<double> acc(g.total(), 0.0);
            SpectralField work = fhat;
            std::vector<double> Fm1(idx.values.size()), Fv(idx.values.size());
            for (std::size_t k = b * detail::scale_block; k < std::min(K, (b + 1) * detail::scale_block); ++k) {
                double t = quad.nodes[k];
                for (std::size_t u = 0; u < idx.values.size(); ++u) {
                    Fm1[u] = ball_profile_minus_one(dim, t * idx.values[u]);
                    Fv[u] = 1.0 + Fm1[u];
                }
                for (std::size_t i = 0; i < g.total(); ++i) {
                    auto u = idx.slot[i];
                    std::complex<double> c = Fm1[u] * fhat.coeffs[i];
                    for (int j = 1; j < N; ++j) c -= M[j] * std::pow(t, 2 * j) * ghat[j - 1].coeffs[i];
                    if (N >= 1) c -= M[N] * std::pow(t, 2 * N) * Fv[u] * ghat[N - 1].coeffs[i];
                    work.coeffs[i] = c;
                }
                auto A = inverse_spectrum(work);
                double wt = quad.weights[k] * std::pow(t, -2.0 * alpha);
                for (std::size_t i = 0; i < g.total(); ++i) acc[i] += wt * A.values[i] * A.values[i];
            }
            partial[b] = std::move(acc);
        });
        res.values = ScalarField(g);
        for (const auto& p : partial)
            for (std::size_t i = 0; i < g.total(); ++i) res.values.values[i] += p[i];
        for (double& v : res.values.values) v = std::sqrt(v);
        return res;
    }

    // Direct mode: ball sums over a distance-sorted stencil, all scales in one sweep.
    detail::check_direct_radius(g, quad.nodes.back());
    for (double t : quad.nodes) detail::check_direct_radius(g, t);
    std::vector<ScalarField> gfields = gs.automatic ? auto_corrections(field, N) : gs.fields;
    auto st = detail::make_stencil(g, quad.nodes);
    const std::size_t K = quad.size();
    // Stencil moments mean |y - x|^{2j} per scale.
    std::vector<std::vector<double>> moment(K, std::vector<double>(N + 1, 0.0));
    for (std::size_t k = 0; k < K; ++k) {
        std::size_t n = st.count[k];
        for (int j = 1; j <= N; ++j) {
            double s = 0.0;
            for (std::size_t m = 0; m < n; ++m) s += std::pow(st.dist2[m], j);
            moment[k][j] = n ? s / n : 0.0;
        }
    }
    std::vector<std::size_t> order_k(K);
    for (std::size_t k = 0; k < K; ++k) order_k[k] = k;
    std::stable_sort(order_k.begin(), order_k.end(), [&](auto a, auto b) { return st.count[a] < st.count[b]; });
    std::vector<double> wt(K);
    for (std::size_t k = 0; k < K; ++k) wt[k] = quad.weights[k] * std::pow(quad.nodes[k], -2.0 * alpha);
    res.values = ScalarField(g);
    parallel_for(g.total(), [&](std::size_t i) {
        int idx[3];
        g.unravel(i, idx);
        double sf = 0.0, sg = 0.0, s2 = 0.0;
        std::size_t m = 0;
        for (std::size_t k : order_k) {
            for (; m < st.count[k]; ++m) {
                std::size_t nb = detail::shifted(g, idx, st.offsets[m]);
                sf += field.values[nb];
                if (N >= 1) sg += gfields[N - 1].values[nb];
            }
            if (m == 0) continue;
            double A = sf / m - field.values[i];
            for (int j = 1; j < N; ++j) A -= gfields[j - 1].values[i] * moment[k][j];
            if (N >= 1) A -= sg / m * moment[k][N];
            s2 += wt[k] * A * A;
        }
        res.values.values[i] = std::sqrt(s2);
    });
    return res;
}

// S_0(f)(x) = sqrt(sum_k w_k |f_{B(x,t_k)} - f_{B(x,2 t_k)}|^2).
inline SquareFunctionResult s0_square_function(const ScalarField& field, const ScaleQuadrature& quad,
                                               BallMode mode = BallMode::spectral) {
    field.validate();
    detail::check_quadrature(quad);
    const GridSpec& g = field.grid;
    const int dim = g.dim();
    SquareFunctionResult res;
    res.t_min = quad.t_min;
    res.t_max = quad.t_max;
    res.scales = quad.size();
    res.truncation_warning = detail::truncation_flag(field, quad);
    if (mode == BallMode::spectral) {
        res.values = detail::spectral_square_sum(forward_spectrum(field), quad, 0.0, [&](std::size_t k, const auto& xi, auto& m) {
            for (std::size_t u = 0; u < xi.size(); ++u) m[u] = s0_multiplier(dim, quad.nodes[k] * xi[u]);
        });
        return res;
    }
    for (double t : quad.nodes) detail::check_direct_radius(g, 2.0 * t);
    std::vector<double> radii(quad.nodes);
    for (double t : quad.nodes) radii.push_back(2.0 * t);
    auto st = detail::make_stencil(g, radii);
    const std::size_t K = quad.size();
    res.values = ScalarField(g);
    parallel_for(g.total(), [&](std::size_t i) {
        int idx[3];
        g.unravel(i, idx);
        std::vector<double> prefix(st.count[2 * K - 1] + 1, 0.0);
        for (std::size_t m = 0; m < st.count[2 * K - 1]; ++m)
            prefix[m + 1] = prefix[m] + field.values[detail::shifted(g, idx, st.offsets[m])];
        double s2 = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            std::size_t a = st.count[k], b = st.count[K + k];
            double d = prefix[a] / a - prefix[b] / b;
            s2 += quad.weights[k] * d * d;
        }
        res.values.values[i] = std::sqrt(s2);
    });
    return res;
}

struct RecoveredCorrections {
    std::vector<ScalarField> g;
    bool ill_conditioned = false;
    double condition_number = 0.0;
    std::size_t nodes_used = 0;
    int nuisance_terms = 0;
};

// Fits f_{B(x,t)} - f(x) = sum_j M_j t^{2j} g_j(x) over the small scales of quad by
// weighted least squares (weights w_k t_k^{-2 alpha}), with extra nuisance powers
// absorbing the higher-order remainder. The fit is linear, so it is solved once and
// applied mode by mode in Fourier space.
inline RecoveredCorrections recover_g(const ScalarField& field, const SmoothnessOrder& order,
                                      const ScaleQuadrature& quad, int nuisance = 3) {
    field.validate();
    detail::check_quadrature(quad);
    RecoveredCorrections out;
    const int N = order.N(), dim = field.grid.dim();
    if (N == 0) return out;
    auto fhat = forward_spectrum(field);
    auto sup = spectral_support(fhat);
    if (sup.empty) {
        for (int j = 0; j < N; ++j) out.g.emplace_back(field.grid);
        return out;
    }
    std::vector<std::size_t> sel;
    for (std::size_t k = 0; k < quad.size(); ++k)
        if (quad.nodes[k] * sup.xi_max <= 0.5) sel.push_back(k);
    detail::require(sel.size() >= std::size_t(N), "recover_g: too few scales below the field's resolution limit");
    int J = N + nuisance;
    while (J > N && sel.size() < std::size_t(J) + 2) --J;
    out.nuisance_terms = J - N;
    out.nodes_used = sel.size();
    double T = quad.nodes[sel.back()];

    Eigen::MatrixXd A(sel.size(), J);
    Eigen::VectorXd s(sel.size());
    for (std::size_t r = 0; r < sel.size(); ++r) {
        double t = quad.nodes[sel[r]];
        s(r) = std::sqrt(quad.weights[sel[r]]) * std::pow(t, -order.alpha());
        for (int j = 1; j <= J; ++j) A(r, j - 1) = s(r) * moment_M(dim, j).value() * std::pow(t / T, 2 * j);
    }
    Eigen::VectorXd colscale = A.colwise().norm().cwiseInverse();
    Eigen::MatrixXd As = A * colscale.asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(As);
    const auto& sv = svd.singularValues();
    out.condition_number = sv(0) / sv(sv.size() - 1);
    out.ill_conditioned = !(out.condition_number < 1e10) || sel.size() < std::size_t(J) + 2;
    // Lambda maps weighted data to scaled coefficients b_j = T^{2j} g_j.
    Eigen::MatrixXd Lambda = As.colPivHouseholderQr().solve(Eigen::MatrixXd::Identity(sel.size(), sel.size()));
    Lambda = colscale.asDiagonal() * Lambda;

    for (int j = 1; j <= N; ++j) {
        double scale = std::pow(T, -2.0 * j);
        out.g.push_back(detail::apply_radial(fhat, [&](double xi) {
            double acc = 0.0;
            for (std::size_t r = 0; r < sel.size(); ++r)
                acc += Lambda(j - 1, r) * s(r) * ball_profile_minus_one(dim, quad.nodes[sel[r]] * xi);
            return acc * scale;
        }));
    }
    return out;
}

struct EquivalenceReport {
    double alpha = 0.0;
    double p = 0.0;
    double norm_S = 0.0;
    double norm_frac = 0.0;
    double ratio = 0.0;
    std::optional<double> predicted_ratio;  // sqrt(I) for p = 2
    double t_min = 0.0;
    double t_max = 0.0;
    std::size_t scales = 0;
    bool truncation_warning = false;
};

inline EquivalenceReport equivalence_report(const ScalarField& field, const SmoothnessOrder& order,
                                            const ScaleQuadrature& quad, BallMode mode = BallMode::spectral) {
    auto sup = spectral_support(field);
    detail::require(!sup.empty, "equivalence_report: field must be nonconstant");
    auto S = square_function(field, Corrections::Auto(), order, quad, mode);
    EquivalenceReport r;
    r.alpha = order.alpha();
    r.p = order.p();
    r.norm_S = lp_norm(S.values, order.p());
    r.norm_frac = lp_norm(frac_laplacian(field, order.alpha()), order.p());
    r.ratio = r.norm_S / r.norm_frac;
    if (order.p() == 2.0) r.predicted_ratio = std::sqrt(constant_I(field.grid.dim(), order).value);
    r.t_min = quad.t_min;
    r.t_max = quad.t_max;
    r.scales = quad.size();
    r.truncation_warning = S.truncation_warning;
    return r;
}

}  // namespace sobolev
