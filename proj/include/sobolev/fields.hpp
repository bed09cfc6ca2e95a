#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "error.hpp"
#include "fft.hpp"

namespace sobolev {

// Rectangular periodic grid. Samples sit at x_a = i_a * h_a, i_a = 0..sizes_a-1.
// Storage is row-major: the last axis varies fastest.
class GridSpec {
public:
    GridSpec() = default;
    GridSpec(int dim, std::vector<int> sizes, std::vector<double> period)
        : dim_(dim), sizes_(std::move(sizes)), period_(std::move(period)) {
        detail::require(dim >= 1 && dim <= 3, "make_grid: dim must be 1, 2 or 3");
        detail::require(sizes_.size() == std::size_t(dim) && period_.size() == std::size_t(dim),
                        "make_grid: sizes and period must have dim entries");
        total_ = 1;
        for (int a = 0; a < dim; ++a) {
            detail::require(sizes_[a] >= 4, "make_grid: every size must be at least 4");
            detail::require(std::isfinite(period_[a]) && period_[a] > 0.0, "make_grid: periods must be positive");
            spacing_.push_back(period_[a] / sizes_[a]);
            total_ *= sizes_[a];
        }
    }

    int dim() const { return dim_; }
    const std::vector<int>& sizes() const { return sizes_; }
    const std::vector<double>& period() const { return period_; }
    const std::vector<double>& spacing() const { return spacing_; }
    std::size_t total() const { return total_; }
    double volume() const {
        double v = 1.0;
        for (double p : period_) v *= p;
        return v;
    }
    double cell_volume() const { return volume() / static_cast<double>(total_); }
    double min_period() const { return *std::min_element(period_.begin(), period_.end()); }

    // Integer multi-index of a flat index.
    void unravel(std::size_t flat, int* idx) const {
        for (int a = dim_ - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(flat % sizes_[a]);
            flat /= sizes_[a];
        }
    }
    std::size_t ravel(const int* idx) const {
        std::size_t flat = 0;
        for (int a = 0; a < dim_; ++a) {
            int i = idx[a] % sizes_[a];
            if (i < 0) i += sizes_[a];
            flat = flat * sizes_[a] + i;
        }
        return flat;
    }
    // Physical coordinate of sample index i along axis a.
    double coordinate(int a, int i) const { return i * spacing_[a]; }
    // Signed frequency index of FFT slot i along axis a, in [-n/2, n/2).
    int frequency_index(int a, int i) const { return i < (sizes_[a] + 1) / 2 ? i : i - sizes_[a]; }

    friend bool operator==(const GridSpec& x, const GridSpec& y) {
        return x.dim_ == y.dim_ && x.sizes_ == y.sizes_ && x.period_ == y.period_;
    }

private:
    int dim_ = 0;
    std::vector<int> sizes_;
    std::vector<double> period_;
    std::vector<double> spacing_;
    std::size_t total_ = 0;
};

inline GridSpec make_grid(int dim, std::vector<int> sizes, std::vector<double> period) {
    return GridSpec(dim, std::move(sizes), std::move(period));
}

struct ScalarField {
    GridSpec grid;
    std::vector<double> values;

    ScalarField() = default;
    ScalarField(GridSpec g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) { validate(); }
    explicit ScalarField(const GridSpec& g, double fill = 0.0) : grid(g), values(g.total(), fill) {}

    void validate() const {
        detail::require(values.size() == grid.total(), "ScalarField: value count does not match grid");
        for (double v : values) detail::require(std::isfinite(v), "ScalarField: non-finite value");
    }
};

// Sample fn(x) at every grid node; fn receives a pointer to dim coordinates.
template <class Fn>
ScalarField sample_field(const GridSpec& g, Fn&& fn) {
    ScalarField f(g);
    int idx[3];
    double x[3];
    for (std::size_t i = 0; i < g.total(); ++i) {
        g.unravel(i, idx);
        for (int a = 0; a < g.dim(); ++a) x[a] = g.coordinate(a, idx[a]);
        f.values[i] = fn(static_cast<const double*>(x));
    }
    f.validate();
    return f;
}

// Fourier-series coefficients: f(x) = sum_k c_k exp(i xi_k . x), xi_k = 2 pi k / period.
// With this normalization sum |f|^2 h_vol = volume * sum |c_k|^2.
struct SpectralField {
    GridSpec grid;
    std::vector<std::complex<double>> coeffs;
    std::vector<double> freq_mag;
};

// |xi_k| per FFT slot.
inline std::vector<double> frequency_magnitudes(const GridSpec& g) {
    std::vector<double> mag(g.total());
    int idx[3];
    for (std::size_t i = 0; i < g.total(); ++i) {
        g.unravel(i, idx);
        double s = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            double xi = 2.0 * std::numbers::pi * g.frequency_index(a, idx[a]) / g.period()[a];
            s += xi * xi;
        }
        mag[i] = std::sqrt(s);
    }
    return mag;
}

namespace detail {
// Slot of the frequency -k for FFT slot i.
inline std::size_t mirror_slot(const GridSpec& g, std::size_t i) {
    int idx[3];
    g.unravel(i, idx);
    for (int a = 0; a < g.dim(); ++a) idx[a] = -idx[a];
    return g.ravel(idx);
}
}  // namespace detail

inline SpectralField forward_spectrum(const ScalarField& field) {
    field.validate();
    const GridSpec& g = field.grid;
    SpectralField out{g, std::vector<std::complex<double>>(g.total()), frequency_magnitudes(g)};
    std::vector<std::complex<double>> in(field.values.begin(), field.values.end());
    detail::FftPlanCache::instance().execute(g.sizes(), FFTW_FORWARD, in.data(), out.coeffs.data());
    double scale = 1.0 / static_cast<double>(g.total());
    for (auto& c : out.coeffs) c *= scale;
    // Real input: make the Hermitian symmetry exact so that amplifying multipliers
    // cannot push rounding noise past the inverse-transform check.
    for (std::size_t i = 0; i < g.total(); ++i) {
        std::size_t m = detail::mirror_slot(g, i);
        if (m < i) continue;
        auto c = 0.5 * (out.coeffs[i] + std::conj(out.coeffs[m]));
        out.coeffs[i] = c;
        out.coeffs[m] = std::conj(c);
    }
    return out;
}

// Inverse transform; rejects spectra that are not conjugate symmetric to 1e-9
// relative to the largest coefficient.
inline ScalarField inverse_spectrum(const SpectralField& spec) {
    const GridSpec& g = spec.grid;
    detail::require(spec.coeffs.size() == g.total(), "inverse_spectrum: coefficient count mismatch");
    double cmax = 0.0;
    for (const auto& c : spec.coeffs) cmax = std::max(cmax, std::abs(c));
    for (std::size_t i = 0; i < g.total(); ++i) {
        auto d = spec.coeffs[i] - std::conj(spec.coeffs[detail::mirror_slot(g, i)]);
        detail::require(std::abs(d) <= 1e-9 * cmax, "inverse_spectrum: coefficients are not conjugate symmetric");
    }
    std::vector<std::complex<double>> in(spec.coeffs), out(g.total());
    detail::FftPlanCache::instance().execute(g.sizes(), FFTW_BACKWARD, in.data(), out.data());
    ScalarField f(g);
    for (std::size_t i = 0; i < g.total(); ++i) f.values[i] = out[i].real();
    return f;
}

// Discrete L^p norm with volume element h_vol; p = infinity gives max |f|.
inline double lp_norm(const ScalarField& field, double p) {
    detail::require(p >= 1.0, "lp_norm: p must be at least 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : field.values) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (double v : field.values) s += std::pow(std::abs(v), p);
    return std::pow(s * field.grid.cell_volume(), 1.0 / p);
}

}  // namespace sobolev
