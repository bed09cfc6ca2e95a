#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "error.hpp"
#include "fields.hpp"

namespace sobolev {

// Test-field families used by the equivalence and S_0 experiments.
enum class CorpusKind { single_mode, band_limited, gaussian_bump, polynomial_window };

inline const char* corpus_kind_name(CorpusKind k) {
    switch (k) {
        case CorpusKind::single_mode: return "mode";
        case CorpusKind::band_limited: return "band";
        case CorpusKind::gaussian_bump: return "bump";
        default: return "window";
    }
}

struct CorpusEntry {
    std::string id;
    CorpusKind kind;
    ScalarField field;
};

namespace detail {
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Box-Muller on the 53-bit uniforms, so streams agree across standard libraries.
inline double unit_normal(std::mt19937_64& rng) {
    double u = unit_uniform(rng), v = unit_uniform(rng);
    return std::sqrt(-2.0 * std::log1p(-u)) * std::cos(2.0 * std::numbers::pi * v);
}

// Squared distance on the torus from node x to centre c.
inline double torus_dist2(const GridSpec& g, const double* x, const double* c) {
    double s = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
        double d = std::fmod(std::abs(x[a] - c[a]), g.period()[a]);
        d = std::min(d, g.period()[a] - d);
        s += d * d;
    }
    return s;
}
}  // namespace detail

// cos(xi_k . x + phase) with xi_k = 2 pi k / period.
inline ScalarField single_mode(const GridSpec& g, const std::vector<int>& k, double phase = 0.0, double amplitude = 1.0) {
    detail::require(k.size() == std::size_t(g.dim()), "single_mode: k needs dim entries");
    return sample_field(g, [&](const double* x) {
        double arg = phase;
        for (int a = 0; a < g.dim(); ++a) arg += 2.0 * std::numbers::pi * k[a] * x[a] / g.period()[a];
        return amplitude * std::cos(arg);
    });
}

// Mean-zero field with independent complex normal coefficients on 1 <= |k| <= kmax.
inline ScalarField random_band_limited(const GridSpec& g, int kmax, std::mt19937_64& rng) {
    detail::require(kmax >= 1, "random_band_limited: kmax must be positive");
    for (int n : g.sizes()) detail::require(2 * kmax < n, "random_band_limited: kmax must be below the Nyquist index");
    SpectralField s{g, std::vector<std::complex<double>>(g.total()), frequency_magnitudes(g)};
    int idx[3];
    for (std::size_t i = 0; i < g.total(); ++i) {
        g.unravel(i, idx);
        double k2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) k2 += double(g.frequency_index(a, idx[a])) * g.frequency_index(a, idx[a]);
        if (k2 == 0.0 || k2 > double(kmax) * kmax) continue;
        std::size_t m = detail::mirror_slot(g, i);
        if (m < i) continue;
        double re = detail::unit_normal(rng), im = detail::unit_normal(rng);
        s.coeffs[i] = {re, im};
        s.coeffs[m] = {re, -im};
    }
    return inverse_spectrum(s);
}

// exp(-d^2 / (2 sigma^2)) with d the torus distance to centre.
inline ScalarField gaussian_bump(const GridSpec& g, const std::vector<double>& centre, double sigma) {
    detail::require(centre.size() == std::size_t(g.dim()) && sigma > 0.0, "gaussian_bump: bad centre or width");
    return sample_field(g, [&](const double* x) {
        return std::exp(-detail::torus_dist2(g, x, centre.data()) / (2.0 * sigma * sigma));
    });
}

// (1 - d^2 / R^2)^power inside the ball of radius R, zero outside.
inline ScalarField polynomial_window(const GridSpec& g, const std::vector<double>& centre, double radius, int power = 4) {
    detail::require(centre.size() == std::size_t(g.dim()) && radius > 0.0 && power >= 1,
                    "polynomial_window: bad centre, radius or power");
    detail::require(radius < 0.5 * g.min_period(), "polynomial_window: radius must fit in the torus");
    return sample_field(g, [&](const double* x) {
        double u = 1.0 - detail::torus_dist2(g, x, centre.data()) / (radius * radius);
        return u > 0.0 ? std::pow(u, power) : 0.0;
    });
}

// Mixed corpus cycling through the four families. Random band-limited fields use
// kmax; the other families draw their parameters from the same stream.
inline std::vector<CorpusEntry> make_corpus(const GridSpec& g, int count, std::uint64_t seed, int kmax = 6,
                                            const std::vector<CorpusKind>& kinds = {CorpusKind::single_mode,
                                                                                    CorpusKind::band_limited,
                                                                                    CorpusKind::gaussian_bump,
                                                                                    CorpusKind::polynomial_window}) {
    detail::require(count >= 1 && !kinds.empty(), "make_corpus: need a positive count and at least one family");
    std::mt19937_64 rng(seed);
    std::vector<CorpusEntry> out;
    const double L = g.min_period();
    for (int c = 0; c < count; ++c) {
        CorpusKind kind = kinds[c % kinds.size()];
        std::vector<double> centre(g.dim());
        for (int a = 0; a < g.dim(); ++a) centre[a] = g.period()[a] * detail::unit_uniform(rng);
        ScalarField f;
        switch (kind) {
            case CorpusKind::single_mode: {
                std::vector<int> k(g.dim());
                do {
                    for (int& v : k) v = static_cast<int>(rng() % (2 * kmax + 1)) - kmax;
                } while (std::all_of(k.begin(), k.end(), [](int v) { return v == 0; }));
                f = single_mode(g, k, 2.0 * std::numbers::pi * detail::unit_uniform(rng));
                break;
            }
            case CorpusKind::band_limited: f = random_band_limited(g, kmax, rng); break;
            case CorpusKind::gaussian_bump:
                f = gaussian_bump(g, centre, L * (0.06 + 0.04 * detail::unit_uniform(rng)));
                break;
            default: f = polynomial_window(g, centre, L * (0.2 + 0.2 * detail::unit_uniform(rng)), 4);
        }
        out.push_back({std::string(corpus_kind_name(kind)) + "-" + std::to_string(c), kind, std::move(f)});
    }
    return out;
}

}  // namespace sobolev
