#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include <sobolev/constants.hpp>
#include <sobolev/corpus.hpp>
#include <sobolev/multiscale.hpp>

#include "oracles.hpp"

using namespace sobolev;
using Catch::Approx;
constexpr double pi = std::numbers::pi;

namespace {
double rel_l2(const ScalarField& a, const ScalarField& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        num += (a.values[i] - b.values[i]) * (a.values[i] - b.values[i]);
        den += b.values[i] * b.values[i];
    }
    return std::sqrt(num / den);
}

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

GridSpec torus(int dim, int n) { return make_grid(dim, std::vector<int>(dim, n), std::vector<double>(dim, 2 * pi)); }

// Oracle profile: Taylor series from axial moments below 1, closed forms above.
struct OracleProfile {
    int n;
    std::vector<double> a;
    explicit OracleProfile(int dim) : n(dim), a(oracle::profile_taylor(dim, 16)) {}
    double operator()(double tau) const {
        if (tau >= 1.0) return oracle::profile_closed(n, tau);
        double s = 0.0, p = 1.0;
        for (double c : a) s += c * p, p *= -tau * tau;
        return s;
    }
};
}  // namespace

TEST_CASE("SmoothnessOrder derives N") {
    CHECK(SmoothnessOrder(0.3).N() == 0);
    CHECK(SmoothnessOrder(1.99).N() == 0);
    CHECK(SmoothnessOrder(2.0).N() == 1);
    CHECK(SmoothnessOrder(2.0).even_integer());
    CHECK(SmoothnessOrder(4.5).N() == 2);
    CHECK(SmoothnessOrder(3.0, 1.5).p() == 1.5);
    CHECK_THROWS_AS(SmoothnessOrder(0.0), domain_error);
    CHECK_THROWS_AS(SmoothnessOrder(3.0, 2.0, 2), domain_error);
}

TEST_CASE("make_scale_quadrature") {
    CHECK_THROWS_AS(make_scale_quadrature(1.0, std::exp(1.0), 1), domain_error);
    CHECK_THROWS_AS(make_scale_quadrature(1.0, 1.0, 16), domain_error);
    CHECK_THROWS_AS(make_scale_quadrature(0.0, 1.0, 16), domain_error);
    auto q = make_scale_quadrature(0.01, 1.0, 64);
    CHECK(std::abs(q.weight_sum() - std::log(100.0)) < 1e-12);
    for (std::size_t k = 1; k < q.size(); ++k) CHECK(q.nodes[k] > q.nodes[k - 1]);

    double a = 0.2, b = 3.0;
    auto q2 = make_scale_quadrature(a, b, 256);
    double s = 0.0;
    for (std::size_t k = 0; k < q2.size(); ++k) s += q2.weights[k] * q2.nodes[k] * q2.nodes[k];
    CHECK(s == Approx((b * b - a * a) / 2.0).epsilon(1e-4));

    // Doubling K halves the log step.
    auto q3 = make_scale_quadrature(a, b, 512);
    CHECK(q3.weights[0] == Approx(q2.weights[0] / 2.0).epsilon(1e-12));

    auto p = make_scale_quadrature_panels(1e-3, 10.0, {0.5, 2.0});
    CHECK(std::abs(p.weight_sum() - std::log(1e4)) < 1e-12);
    double s3 = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) s3 += p.weights[k] * std::pow(p.nodes[k], 3);
    CHECK(s3 == Approx((1000.0 - 1e-9) / 3.0).epsilon(1e-12));
}

TEST_CASE("ball_mean") {
    auto g = torus(2, 64);
    ScalarField c(g, 3.25);
    for (auto mode : {BallMode::spectral, BallMode::direct}) {
        auto m = ball_mean(c, 0.7, mode);
        for (double v : m.values) CHECK(v == Approx(3.25).epsilon(1e-13));
    }
    // Single mode: eigenfunction with eigenvalue F(t |xi|).
    OracleProfile F(2);
    auto f = single_mode(g, {3, -2}, 0.4);
    double t = 0.45, xi = std::sqrt(13.0);
    auto m = ball_mean(f, t, BallMode::spectral);
    for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(std::abs(m.values[i] - F(t * xi) * f.values[i]) < 1e-12);

    std::mt19937_64 rng(1);
    for (auto [dim, n] : {std::pair{1, 1024}, std::pair{2, 256}}) {
        auto r = random_band_limited(torus(dim, n), 6, rng);
        auto s = ball_mean(r, 0.1, BallMode::spectral), d = ball_mean(r, 0.1, BallMode::direct);
        INFO("dim " << dim);
        CHECK(rel_l2(d, s) < 0.02);
    }
    CHECK_THROWS_AS(ball_mean(c, 3.5, BallMode::direct), domain_error);
    CHECK_THROWS_AS(ball_mean(c, 0.0), domain_error);
}

TEST_CASE("frac_laplacian") {
    auto g = torus(2, 32);
    auto f = single_mode(g, {2, 1}, 0.3, 1.5);
    for (double a : {0.5, 1.0, 2.0, 3.7}) {
        auto L = frac_laplacian(f, a);
        double m = std::pow(std::sqrt(5.0), a);
        for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(std::abs(L.values[i] - m * f.values[i]) < 1e-10 * m);
    }
    ScalarField c(g, 4.0);
    CHECK(max_abs(frac_laplacian(c, 1.3)) < 1e-13);
    CHECK_THROWS_AS(frac_laplacian(f, 0.0), domain_error);

    // alpha = 2 against the second-order centred finite-difference -Delta.
    auto g2 = torus(2, 256);
    std::mt19937_64 rng(4);
    auto r = random_band_limited(g2, 6, rng);
    auto L = frac_laplacian(r, 2.0);
    ScalarField fd(g2);
    double h = g2.spacing()[0];
    int idx[2];
    for (std::size_t i = 0; i < g2.total(); ++i) {
        g2.unravel(i, idx);
        double s = -4.0 * r.values[i];
        for (auto [di, dj] : {std::pair{1, 0}, std::pair{-1, 0}, std::pair{0, 1}, std::pair{0, -1}}) {
            int j[2] = {idx[0] + di, idx[1] + dj};
            s += r.values[g2.ravel(j)];
        }
        fd.values[i] = -s / (h * h);
    }
    CHECK(rel_l2(fd, L) < 0.01);
}

TEST_CASE("square_function trivial and rejected inputs") {
    auto g = torus(1, 128);
    ScalarField c(g, -2.0);
    auto q = make_scale_quadrature(0.02, 2.0, 64);
    for (double a : {0.5, 1.5, 2.0, 3.0, 4.5})
        for (auto mode : {BallMode::spectral, BallMode::direct}) {
            auto S = square_function(c, Corrections::Auto(), SmoothnessOrder(a), q, mode);
            CHECK(max_abs(S.values) < 1e-12);
        }
    auto f = single_mode(g, {1}, 0.0);
    CHECK_THROWS_AS(square_function(f, Corrections::Given({}), SmoothnessOrder(2.0), q), domain_error);
    CHECK_THROWS_AS(square_function(f, Corrections::Given({f}), SmoothnessOrder(1.0), q), domain_error);
    CHECK_THROWS_AS(square_function(f, Corrections::Auto(), SmoothnessOrder(1.0), make_scale_quadrature(0.1, 6.0, 16),
                                    BallMode::direct),
                    domain_error);
    // The narrow range does not resolve either limit.
    CHECK(square_function(f, Corrections::Auto(), SmoothnessOrder(1.0), q).truncation_warning);
    CHECK_FALSE(square_function(f, Corrections::Auto(), SmoothnessOrder(1.0), default_scale_quadrature(f, 64))
                    .truncation_warning);
}

TEST_CASE("explicit corrections equal to the automatic ones reproduce AUTO") {
    std::mt19937_64 rng(2);
    auto f = random_band_limited(torus(2, 32), 5, rng);
    auto q = default_scale_quadrature(f, 128);
    for (double a : {2.0, 3.0, 4.5}) {
        SmoothnessOrder o(a);
        auto A = square_function(f, Corrections::Auto(), o, q);
        auto G = square_function(f, Corrections::Given(auto_corrections(f, o.N())), o, q);
        CHECK(rel_l2(G.values, A.values) < 1e-9);
    }
}

TEST_CASE("discrete Plancherel identity for S_alpha(f, AUTO)") {
    std::mt19937_64 rng(3);
    for (int dim = 1; dim <= 2; ++dim)
        for (double a : {1.0, 2.0, 2.5, 3.0}) {
            auto f = random_band_limited(torus(dim, dim == 1 ? 128 : 32), 6, rng);
            auto q = default_scale_quadrature(f, 256);
            auto S = square_function(f, Corrections::Auto(), SmoothnessOrder(a), q);
            double lhs = lp_norm(S.values, 2.0);
            lhs *= lhs;
            auto s = forward_spectrum(f);
            double rhs = 0.0;
            for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
                if (std::norm(s.coeffs[i]) == 0.0) continue;
                double Q = 0.0;
                for (std::size_t k = 0; k < q.size(); ++k) {
                    double phi = multiplier_deficit(dim, a, q.nodes[k] * s.freq_mag[i]);
                    Q += q.weights[k] * std::pow(q.nodes[k], -2.0 * a) * phi * phi;
                }
                rhs += std::norm(s.coeffs[i]) * Q;
            }
            rhs *= f.grid.volume();
            INFO("dim " << dim << " alpha " << a);
            CHECK(std::abs(lhs - rhs) <= 1e-8 * rhs);
        }
}

TEST_CASE("spectral and direct square functions agree at 128+ points per axis") {
    std::mt19937_64 rng(6);
    for (auto [dim, n] : {std::pair{1, 256}, std::pair{2, 128}}) {
        auto f = random_band_limited(torus(dim, n), 4, rng);
        auto q = make_scale_quadrature(0.01, 3.0, 96);
        for (double a : {1.0, 1.5, 2.0, 3.0}) {
            SmoothnessOrder o(a);
            auto s = square_function(f, Corrections::Auto(), o, q, BallMode::spectral);
            auto d = square_function(f, Corrections::Auto(), o, q, BallMode::direct);
            INFO("dim " << dim << " alpha " << a << " diff " << rel_l2(d.values, s.values));
            CHECK(rel_l2(d.values, s.values) < 0.05);
        }
    }
}

TEST_CASE("s0_square_function") {
    auto g = torus(1, 256);
    ScalarField c(g, 1.0);
    auto q = make_scale_quadrature(0.01, 1.5, 64);
    CHECK(max_abs(s0_square_function(c, q).values) < 1e-13);
    CHECK(max_abs(s0_square_function(c, q, BallMode::direct).values) < 1e-13);

    // Single mode: the constant envelope times |cos|.
    OracleProfile F(1);
    auto f = single_mode(g, {3}, 0.0);
    double env = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        double d = F(3.0 * q.nodes[k]) - F(6.0 * q.nodes[k]);
        env += q.weights[k] * d * d;
    }
    env = std::sqrt(env);
    auto S = s0_square_function(f, q);
    for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(std::abs(S.values.values[i] - env * std::abs(f.values[i])) < 1e-9);
    auto D = s0_square_function(f, q, BallMode::direct);
    CHECK(rel_l2(D.values, S.values) < 0.05);
    CHECK_THROWS_AS(s0_square_function(f, make_scale_quadrature(0.1, 2.0, 16), BallMode::direct), domain_error);

    // Norm ratio against sqrt(J_0).
    std::mt19937_64 rng(12);
    double predicted = std::sqrt(constant_S0(1).value);
    for (int trial = 0; trial < 5; ++trial) {
        auto r = random_band_limited(g, 8, rng);
        auto Sr = s0_square_function(r, default_scale_quadrature(r, 512));
        CHECK(lp_norm(Sr.values, 2.0) / lp_norm(r, 2.0) == Approx(predicted).epsilon(0.02));
    }
}

TEST_CASE("recover_g") {
    auto g = torus(2, 64);
    CHECK(recover_g(single_mode(g, {1, 1}), SmoothnessOrder(1.5), make_scale_quadrature(1e-3, 1.0, 64)).g.empty());

    ScalarField c(g, 5.0);
    auto rc = recover_g(c, SmoothnessOrder(2.0), make_scale_quadrature(1e-3, 1.0, 64));
    REQUIRE(rc.g.size() == 1);
    CHECK(max_abs(rc.g[0]) == 0.0);

    // Single mode: Delta f = -|xi|^2 f exactly.
    auto f = single_mode(g, {2, 3}, 0.2);
    auto q = default_scale_quadrature(f, 512);
    auto r = recover_g(f, SmoothnessOrder(2.0), q);
    REQUIRE(r.g.size() == 1);
    CHECK_FALSE(r.ill_conditioned);
    ScalarField expect = f;
    for (double& v : expect.values) v *= -13.0 / 4.0;
    CHECK(rel_l2(r.g[0], expect) < 0.01);

    // Fixed point: S with the recovered corrections matches S with AUTO.
    std::mt19937_64 rng(9);
    auto b = random_band_limited(g, 5, rng);
    auto qb = default_scale_quadrature(b, 512);
    for (double a : {2.0, 3.0, 4.5}) {
        SmoothnessOrder o(a);
        auto rec = recover_g(b, o, qb);
        auto SA = square_function(b, Corrections::Auto(), o, qb);
        auto SR = square_function(b, Corrections::Given(rec.g), o, qb);
        INFO("alpha " << a);
        CHECK(lp_norm(SR.values, 2.0) == Approx(lp_norm(SA.values, 2.0)).epsilon(0.01));
    }

    // Too few scales below the resolution limit.
    auto narrow = make_scale_quadrature(0.4 / std::sqrt(13.0), 10.0, 16);
    bool rejected = false, flagged = false;
    try {
        flagged = recover_g(f, SmoothnessOrder(2.0), narrow).ill_conditioned;
    } catch (const domain_error&) {
        rejected = true;
    }
    CHECK((rejected || flagged));
}

TEST_CASE("equivalence_report") {
    std::mt19937_64 rng(21);
    auto f1 = random_band_limited(torus(1, 256), 8, rng);
    auto r1 = equivalence_report(f1, SmoothnessOrder(1.0), default_scale_quadrature(f1, 512));
    REQUIRE(r1.predicted_ratio);
    CHECK(r1.ratio / *r1.predicted_ratio == Approx(1.0).margin(0.02));
    CHECK(*r1.predicted_ratio == Approx(std::sqrt(constant_I(1, 1.0).value)));

    auto f2 = random_band_limited(torus(2, 64), 6, rng);
    auto r2 = equivalence_report(f2, SmoothnessOrder(2.0), default_scale_quadrature(f2, 512));
    CHECK(r2.ratio / *r2.predicted_ratio == Approx(1.0).margin(0.02));
    CHECK(r2.norm_S > 0.0);
    CHECK(r2.norm_frac > 0.0);

    auto g = torus(1, 128);
    for (double a : {0.5, 2.0, 3.3}) {
        auto m1 = single_mode(g, {4}, 0.1, 1.0), m2 = single_mode(g, {4}, 0.1, 7.5);
        auto q = default_scale_quadrature(m1, 256);
        auto e1 = equivalence_report(m1, SmoothnessOrder(a, 3.0), q), e2 = equivalence_report(m2, SmoothnessOrder(a, 3.0), q);
        CHECK(e1.ratio == Approx(e2.ratio).epsilon(1e-12));
        CHECK_FALSE(e1.predicted_ratio);
    }
    CHECK_THROWS_AS(equivalence_report(ScalarField(g, 1.0), SmoothnessOrder(1.0), make_scale_quadrature(0.1, 1, 16)),
                    domain_error);
}

TEST_CASE("measured S_2 ratio squared matches I(3, 2)") {
    std::mt19937_64 rng(30);
    auto f = random_band_limited(torus(3, 16), 4, rng);
    auto r = equivalence_report(f, SmoothnessOrder(2.0), default_scale_quadrature(f, 512));
    CHECK(r.ratio * r.ratio == Approx(constant_I(3, 2.0).value).epsilon(0.02));
}

TEST_CASE("results do not depend on the thread count") {
    std::mt19937_64 rng(31);
    auto f = random_band_limited(torus(2, 32), 5, rng);
    auto q = default_scale_quadrature(f, 100);
    setenv("SOBOLEV_THREADS", "1", 1);
    auto a = square_function(f, Corrections::Auto(), SmoothnessOrder(2.5), q).values.values;
    auto ad = square_function(f, Corrections::Auto(), SmoothnessOrder(2.5), make_scale_quadrature(0.01, 2.0, 40),
                              BallMode::direct).values.values;
    setenv("SOBOLEV_THREADS", "4", 1);
    auto b = square_function(f, Corrections::Auto(), SmoothnessOrder(2.5), q).values.values;
    auto bd = square_function(f, Corrections::Auto(), SmoothnessOrder(2.5), make_scale_quadrature(0.01, 2.0, 40),
                              BallMode::direct).values.values;
    unsetenv("SOBOLEV_THREADS");
    CHECK(a == b);
    CHECK(ad == bd);
}
