#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include <sobolev/corpus.hpp>
#include <sobolev/fields.hpp>

using namespace sobolev;
using Catch::Approx;
constexpr double pi = std::numbers::pi;

namespace {
ScalarField random_field(const GridSpec& g, std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    ScalarField f(g);
    for (double& v : f.values) v = n(rng);
    return f;
}
}  // namespace

TEST_CASE("make_grid validates and precomputes spacing") {
    auto g1 = make_grid(1, {256}, {2 * pi});
    CHECK(g1.spacing()[0] == Approx(2 * pi / 256));
    auto g3 = make_grid(3, {32, 32, 32}, {1, 1, 1});
    CHECK(g3.total() == 32768);
    CHECK(g3.volume() == Approx(1.0));
    auto g2 = make_grid(2, {64, 128}, {1, 2});
    CHECK(g2.spacing()[0] == Approx(1.0 / 64));
    CHECK(g2.spacing()[1] == Approx(2.0 / 128));

    CHECK_THROWS_AS(make_grid(0, {}, {}), domain_error);
    CHECK_THROWS_AS(make_grid(4, {8, 8, 8, 8}, {1, 1, 1, 1}), domain_error);
    CHECK_THROWS_AS(make_grid(1, {2}, {1}), domain_error);
    CHECK_THROWS_AS(make_grid(1, {8}, {-1}), domain_error);
    CHECK_THROWS_AS(make_grid(2, {8}, {1, 1}), domain_error);
}

TEST_CASE("forward_spectrum of simple fields") {
    auto g = make_grid(1, {64}, {3.0});
    ScalarField c(g, 2.5);
    auto s = forward_spectrum(c);
    CHECK(std::abs(s.coeffs[0] - 2.5) < 1e-14);
    for (std::size_t i = 1; i < s.coeffs.size(); ++i) CHECK(std::abs(s.coeffs[i]) < 1e-14);
    CHECK(s.freq_mag[0] == 0.0);

    auto m = sample_field(g, [](const double* x) { return std::cos(2 * pi * x[0] / 3.0); });
    auto sm = forward_spectrum(m);
    for (std::size_t i = 0; i < sm.coeffs.size(); ++i) {
        bool pm1 = i == 1 || i == 63;
        if (pm1) CHECK(std::abs(sm.coeffs[i] - 0.5) < 1e-14);
        else CHECK(std::abs(sm.coeffs[i]) < 1e-14);
    }
    CHECK(sm.freq_mag[1] == Approx(2 * pi / 3.0));
}

TEST_CASE("Parseval holds against a direct sum for 100 random fields per dimension") {
    std::mt19937_64 rng(11);
    std::vector<GridSpec> grids{make_grid(1, {128}, {2.0}), make_grid(2, {16, 32}, {1.0, 3.0}),
                                make_grid(3, {8, 8, 16}, {1.0, 2.0, 0.5})};
    for (const auto& g : grids) {
        for (int trial = 0; trial < 100; ++trial) {
            auto f = random_field(g, rng);
            double direct = 0.0;
            for (double v : f.values) direct += v * v * g.cell_volume();
            auto s = forward_spectrum(f);
            double spectral = 0.0;
            for (const auto& c : s.coeffs) spectral += std::norm(c);
            spectral *= g.volume();
            REQUIRE(std::abs(spectral - direct) <= 1e-10 * direct);
            REQUIRE(std::abs(lp_norm(f, 2.0) * lp_norm(f, 2.0) - direct) <= 1e-10 * direct);
        }
    }
}

TEST_CASE("inverse_spectrum round trip and symmetry check") {
    std::mt19937_64 rng(5);
    for (auto g : {make_grid(1, {100}, {1.0}), make_grid(2, {12, 20}, {1.0, 2.0}), make_grid(3, {8, 6, 10}, {1, 1, 1})}) {
        auto f = random_field(g, rng);
        auto back = inverse_spectrum(forward_spectrum(f));
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            num += (back.values[i] - f.values[i]) * (back.values[i] - f.values[i]);
            den += f.values[i] * f.values[i];
        }
        CHECK(std::sqrt(num / den) < 1e-12);
    }

    auto g = make_grid(2, {8, 8}, {1, 1});
    SpectralField zero{g, std::vector<std::complex<double>>(g.total()), frequency_magnitudes(g)};
    for (double v : inverse_spectrum(zero).values) CHECK(v == 0.0);
    SpectralField dc = zero;
    dc.coeffs[0] = 1.75;
    for (double v : inverse_spectrum(dc).values) CHECK(v == Approx(1.75).epsilon(1e-14));

    SpectralField bad = zero;
    bad.coeffs[1] = {1.0, 0.0};
    CHECK_THROWS_AS(inverse_spectrum(bad), domain_error);
}

TEST_CASE("lp_norm") {
    auto g = make_grid(2, {16, 16}, {1, 1});
    ScalarField one(g, 1.0);
    for (double p : {1.0, 1.5, 2.0, 3.0, 7.0}) CHECK(lp_norm(one, p) == Approx(1.0).epsilon(1e-13));
    CHECK(lp_norm(one, std::numeric_limits<double>::infinity()) == 1.0);
    CHECK_THROWS_AS(lp_norm(one, 0.5), domain_error);

    auto g1 = make_grid(1, {256}, {1.0});
    auto c = sample_field(g1, [](const double* x) { return std::cos(2 * pi * x[0]); });
    CHECK(std::abs(lp_norm(c, 2.0) - 1.0 / std::sqrt(2.0)) < 1e-12);

    std::mt19937_64 rng(3);
    auto f = random_field(g, rng);
    ScalarField f2 = f, fa = f;
    for (double& v : f2.values) v *= 2.0;
    for (double& v : fa.values) v = std::abs(v) * 1.1;
    for (double p : {1.0, 2.0, 4.0, std::numeric_limits<double>::infinity()}) {
        CHECK(lp_norm(f2, p) == Approx(2.0 * lp_norm(f, p)).epsilon(1e-13));
        CHECK(lp_norm(fa, p) > lp_norm(f, p));
    }
}

TEST_CASE("ScalarField rejects bad data") {
    auto g = make_grid(1, {8}, {1.0});
    CHECK_THROWS_AS(ScalarField(g, std::vector<double>(7, 0.0)), domain_error);
    std::vector<double> v(8, 0.0);
    v[3] = std::nan("");
    CHECK_THROWS_AS(ScalarField(g, v), domain_error);
}

TEST_CASE("corpus fields are deterministic, real and band-limited") {
    auto g = make_grid(2, {32, 32}, {2 * pi, 2 * pi});
    auto a = make_corpus(g, 8, 42, 5), b = make_corpus(g, 8, 42, 5);
    REQUIRE(a.size() == 8);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].field.values == b[i].field.values);
    std::mt19937_64 rng(1);
    auto f = random_band_limited(g, 5, rng);
    auto s = forward_spectrum(f);
    CHECK(std::abs(s.coeffs[0]) < 1e-14);
    for (std::size_t i = 0; i < s.coeffs.size(); ++i)
        if (s.freq_mag[i] > 5.0 + 1e-9) CHECK(std::abs(s.coeffs[i]) < 1e-12);
    CHECK_THROWS_AS(random_band_limited(g, 16, rng), domain_error);
}
