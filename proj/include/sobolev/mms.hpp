#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "error.hpp"
#include "fields.hpp"
#include "multiscale.hpp"
#include "order.hpp"
#include "parallel.hpp"

namespace sobolev {

// Finite metric measure space: full distance matrix, positive point masses, and a
// per-point ordering of all points by distance for ball queries.
class MetricMeasureSpace {
public:
    std::size_t size() const { return weights_.size(); }
    double dist(std::size_t i, std::size_t j) const { return dist_[i * size() + j]; }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<std::string>& ids() const { return ids_; }
    double diameter() const { return diameter_; }
    double min_positive_distance() const { return min_positive_; }

    // Points ordered by distance from i (i itself first); ties broken by index.
    const std::uint32_t* neighbours(std::size_t i) const { return order_.data() + i * size(); }
    // Number of points in the open ball B(i, t).
    std::size_t ball_count(std::size_t i, double t) const {
        const std::uint32_t* nb = neighbours(i);
        std::size_t lo = 0, hi = size();
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (dist(i, nb[mid]) < t) lo = mid + 1;
            else hi = mid;
        }
        return lo;
    }
    // Distance from i to its nearest other point.
    double nearest_neighbour(std::size_t i) const { return size() > 1 ? dist(i, neighbours(i)[1]) : 0.0; }

private:
    friend MetricMeasureSpace build_space(std::vector<double>, std::vector<double>, std::vector<std::string>);
    std::vector<double> dist_;
    std::vector<double> weights_;
    std::vector<std::string> ids_;
    std::vector<std::uint32_t> order_;
    double diameter_ = 0.0;
    double min_positive_ = 0.0;
};

// Validates a row-major n x n distance matrix and weights. Symmetry and zero
// diagonal are checked exactly up to 1e-12 relative to the diameter; the triangle
// inequality is spot-checked on random triples (all triples when n <= 40).
inline MetricMeasureSpace build_space(std::vector<double> dist, std::vector<double> weights,
                                      std::vector<std::string> ids = {}) {
    const std::size_t n = weights.size();
    detail::require(n >= 1, "build_space: need at least one point");
    detail::require(n <= std::numeric_limits<std::uint32_t>::max(), "build_space: too many points");
    detail::require(dist.size() == n * n, "build_space: distance matrix must be n x n");
    if (ids.empty())
        for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
    detail::require(ids.size() == n, "build_space: one id per point");
    double D = 0.0;
    for (double d : dist) {
        detail::require(std::isfinite(d) && d >= 0.0, "build_space: distances must be finite and non-negative");
        D = std::max(D, d);
    }
    for (double w : weights) detail::require(std::isfinite(w) && w > 0.0, "build_space: weights must be positive");
    const double tol = 1e-12 * std::max(D, 1e-300);
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        detail::require(dist[i * n + i] <= tol, "build_space: dist(i,i) must be 0");
        for (std::size_t j = i + 1; j < n; ++j) {
            detail::require(std::abs(dist[i * n + j] - dist[j * n + i]) <= tol, "build_space: distance is not symmetric");
            detail::require(dist[i * n + j] > 0.0, "build_space: distinct points must have positive distance");
            dmin = std::min(dmin, dist[i * n + j]);
        }
    }
    auto d = [&](std::size_t a, std::size_t b) { return dist[a * n + b]; };
    auto check = [&](std::size_t a, std::size_t b, std::size_t c) {
        detail::require(d(a, c) <= d(a, b) + d(b, c) + 1e-9 * std::max(D, 1e-300),
                        "build_space: triangle inequality violated");
    };
    if (n <= 40) {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c) check(a, b, c);
    } else {
        std::mt19937_64 rng(0x5eedULL);
        for (std::size_t k = 0; k < 20 * n; ++k) check(rng() % n, rng() % n, rng() % n);
    }
    MetricMeasureSpace s;
    s.order_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t* row = s.order_.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) row[j] = static_cast<std::uint32_t>(j);
        std::sort(row, row + n, [&](std::uint32_t a, std::uint32_t b) {
            double da = a == i ? -1.0 : d(i, a), db = b == i ? -1.0 : d(i, b);
            return da < db || (da == db && a < b);
        });
    }
    s.dist_ = std::move(dist);
    s.weights_ = std::move(weights);
    s.ids_ = std::move(ids);
    s.diameter_ = D;
    s.min_positive_ = n > 1 ? dmin : 0.0;
    return s;
}

// Euclidean distances between points given as rows of `coords` (dim columns); a
// non-empty period makes the metric that of the flat torus.
inline MetricMeasureSpace build_space_from_points(const std::vector<double>& coords, int dim, std::vector<double> weights,
                                                  const std::vector<double>& period = {},
                                                  std::vector<std::string> ids = {}) {
    detail::require(dim >= 1 && dim <= 3, "build_space_from_points: dim must be 1, 2 or 3");
    detail::require(coords.size() == weights.size() * dim, "build_space_from_points: coordinate count mismatch");
    detail::require(period.empty() || period.size() == std::size_t(dim), "build_space_from_points: period needs dim entries");
    const std::size_t n = weights.size();
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (int a = 0; a < dim; ++a) {
                double dx = std::abs(coords[i * dim + a] - coords[j * dim + a]);
                if (!period.empty()) {
                    dx = std::fmod(dx, period[a]);
                    dx = std::min(dx, period[a] - dx);
                }
                s += dx * dx;
            }
            dist[i * n + j] = dist[j * n + i] = std::sqrt(s);
        }
    return build_space(std::move(dist), std::move(weights), std::move(ids));
}

struct MmsSquareResult {
    std::vector<double> S;
    double t_min = 0.0;
    double t_max = 0.0;
    std::size_t balls = 0;            // point-scale pairs evaluated
    std::size_t singleton_balls = 0;  // balls containing only their centre
    std::size_t min_points = 0;       // smallest ball population
    double mean_points = 0.0;
};

// Scale range from the 1st-percentile nearest-neighbour distance up to the diameter.
inline ScaleQuadrature mms_default_quadrature(const MetricMeasureSpace& space, int K = 128) {
    detail::require(space.size() >= 2, "mms_default_quadrature: need at least two points");
    std::vector<double> nn;
    for (std::size_t i = 0; i < space.size(); ++i) nn.push_back(space.nearest_neighbour(i));
    std::sort(nn.begin(), nn.end());
    double lo = nn[static_cast<std::size_t>(std::floor(0.01 * (nn.size() - 1)))];
    return make_scale_quadrature(lo, space.diameter(), K);
}

// S(x) = sqrt(sum_k w_k t_k^{-2 alpha} |mu-mean over B(x,t_k) of R_N(., x)|^2) with
// R_N(y,x) = f(y) - f(x) - sum_{j<N} g_j(x) d(y,x)^{2j} - (g_N)_{B(x,t)} d(y,x)^{2N}.
inline MmsSquareResult square_function_mms(const MetricMeasureSpace& space, const std::vector<double>& f,
                                           const std::vector<std::vector<double>>& gs, const SmoothnessOrder& order,
                                           const ScaleQuadrature& quad) {
    const std::size_t n = space.size();
    const int N = order.N();
    detail::require(f.size() == n, "square_function_mms: f must have one value per point");
    detail::require(gs.size() == std::size_t(N), "square_function_mms: expected exactly N correction functions");
    for (const auto& g : gs) detail::require(g.size() == n, "square_function_mms: g must have one value per point");
    for (double v : f) detail::require(std::isfinite(v), "square_function_mms: non-finite f");
    detail::check_quadrature(quad);
    for (double t : quad.nodes)
        detail::require(t <= space.diameter() * (1.0 + 1e-12), "square_function_mms: scales must not exceed the diameter");

    const std::size_t K = quad.size();
    std::vector<double> wt(K);
    for (std::size_t k = 0; k < K; ++k) wt[k] = quad.weights[k] * std::pow(quad.nodes[k], -2.0 * order.alpha());

    MmsSquareResult res;
    res.S.assign(n, 0.0);
    res.t_min = quad.t_min;
    res.t_max = quad.t_max;
    std::vector<std::size_t> singles(n, 0), minpts(n, n), sumpts(n, 0);
    parallel_for(n, [&](std::size_t i) {
        const std::uint32_t* nb = space.neighbours(i);
        // Prefix sums along the distance order: mu, mu (f - f(x)), mu g_N, mu d^{2j}.
        std::vector<double> pm(n + 1, 0.0), pf(n + 1, 0.0), pg(n + 1, 0.0);
        std::vector<std::vector<double>> pd(N + 1, std::vector<double>(n + 1, 0.0));
        for (std::size_t m = 0; m < n; ++m) {
            std::size_t y = nb[m];
            double mu = space.weight(y), d2 = space.dist(i, y) * space.dist(i, y);
            pm[m + 1] = pm[m] + mu;
            pf[m + 1] = pf[m] + mu * (f[y] - f[i]);
            if (N >= 1) pg[m + 1] = pg[m] + mu * gs[N - 1][y];
            double p = 1.0;
            for (int j = 1; j <= N; ++j) {
                p *= d2;
                pd[j][m + 1] = pd[j][m] + mu * p;
            }
        }
        double s2 = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            std::size_t c = space.ball_count(i, quad.nodes[k]);
            minpts[i] = std::min(minpts[i], c);
            sumpts[i] += c;
            if (c <= 1) {
                ++singles[i];
                continue;
            }
            double mass = pm[c];
            double A = pf[c] / mass;
            for (int j = 1; j < N; ++j) A -= gs[j - 1][i] * pd[j][c] / mass;
            if (N >= 1) A -= pg[c] / mass * pd[N][c] / mass;
            s2 += wt[k] * A * A;
        }
        res.S[i] = std::sqrt(s2);
    });
    res.balls = n * K;
    res.min_points = n;
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        res.singleton_balls += singles[i];
        res.min_points = std::min(res.min_points, minpts[i]);
        total += sumpts[i];
    }
    res.mean_points = static_cast<double>(total) / static_cast<double>(res.balls);
    detail::require(res.singleton_balls < res.balls,
                    "square_function_mms: every ball is a singleton; the scale range is below the point spacing");
    return res;
}

struct GridConsistencyRow {
    int resolution = 0;
    double spacing = 0.0;
    double error = 0.0;            // relative L2 distance to the spectral square function
    double direct_difference = 0.0;  // relative L2 distance to the direct-mode square function
};

struct GridConsistencyReport {
    std::vector<GridConsistencyRow> rows;
    double observed_order = 0.0;  // slope of log(error) against log(spacing)
    bool monotone = true;
};

// Samples fn on periodic grids of each resolution (points per axis), evaluates the
// metric-measure estimator on the torus point cloud with cell-volume weights, and
// compares it with the spectral and direct-mode grid square functions.
inline GridConsistencyReport grid_consistency(const std::function<double(const double*)>& fn, int dim,
                                              const std::vector<double>& period, const SmoothnessOrder& order,
                                              const std::vector<int>& resolutions, const ScaleQuadrature& quad) {
    detail::require(!resolutions.empty(), "grid_consistency: need at least one resolution");
    for (std::size_t i = 1; i < resolutions.size(); ++i)
        detail::require(resolutions[i] > resolutions[i - 1], "grid_consistency: resolutions must increase");
    GridConsistencyReport rep;
    auto l2 = [](const std::vector<double>& a, const std::vector<double>& b) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            num += (a[i] - b[i]) * (a[i] - b[i]);
            den += b[i] * b[i];
        }
        return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    };
    for (int res : resolutions) {
        GridSpec g(dim, std::vector<int>(dim, res), period);
        ScalarField f = sample_field(g, fn);
        auto gs = auto_corrections(f, order.N());
        std::vector<double> coords;
        int idx[3];
        for (std::size_t i = 0; i < g.total(); ++i) {
            g.unravel(i, idx);
            for (int a = 0; a < dim; ++a) coords.push_back(g.coordinate(a, idx[a]));
        }
        auto space = build_space_from_points(coords, dim, std::vector<double>(g.total(), g.cell_volume()), period);
        std::vector<std::vector<double>> gv;
        for (const auto& c : gs) gv.push_back(c.values);
        auto mms = square_function_mms(space, f.values, gv, order, quad);
        auto spec = square_function(f, Corrections::Auto(), order, quad, BallMode::spectral);
        auto direct = square_function(f, Corrections::Given(gs), order, quad, BallMode::direct);
        GridConsistencyRow row;
        row.resolution = res;
        row.spacing = *std::max_element(g.spacing().begin(), g.spacing().end());
        row.error = l2(mms.S, spec.values.values);
        row.direct_difference = l2(mms.S, direct.values.values);
        if (!rep.rows.empty() && !(row.error < rep.rows.back().error)) rep.monotone = false;
        rep.rows.push_back(row);
    }
    if (rep.rows.size() >= 2 && rep.rows.front().error > 0.0) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (const auto& r : rep.rows) {
            if (!(r.error > 0.0)) continue;
            double x = std::log(r.spacing), y = std::log(r.error);
            sx += x, sy += y, sxx += x * x, sxy += x * y, ++m;
        }
        if (m >= 2) rep.observed_order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }
    // A zero error curve (e.g. constant fields) counts as monotone.
    bool all_zero = std::all_of(rep.rows.begin(), rep.rows.end(), [](const auto& r) { return r.error == 0.0; });
    if (all_zero) rep.monotone = true;
    return rep;
}

}  // namespace sobolev
