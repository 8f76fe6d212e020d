// sampling.hpp: uniform grids, sampled wavefunctions and DFT domain changes.
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "combhom/shapes.hpp"

namespace combhom {
namespace sampling {

enum class Domain { time, frequency };

Domain conjugate_domain(Domain d);

// Uniform grid x_i = start + i * step. span() is the DFT period count*step,
// one step beyond the last sample.
struct Grid {
    double start{0.0};
    double step{1.0};
    size_t count{0};

    double at(size_t i) const { return start + step * double(i); }
    double span() const { return step * double(count); }
    std::vector<double> points() const;

    // Grid containing x = 0 with floor(count/2) samples below it.
    static Grid centered(double step, size_t count);

    // DFT-conjugate grid: step 2 pi / span(), same count, centered at 0.
    Grid conjugate() const;
};

void validate(const Grid& g);

// Index of the sample at x = 0. Throws unless the grid contains it.
size_t zero_index(const Grid& g);

struct SampledWavefunction {
    Domain domain{Domain::time};
    Grid   grid;
    std::vector<std::complex<double>> amplitudes;
};

// Row-major table psi[i * grid2.count + j] on grid1 x grid2.
struct SampledWavefunction2D {
    Domain domain{Domain::time};
    Grid   grid1;
    Grid   grid2;
    std::vector<std::complex<double>> amplitudes;

    std::complex<double>& at(size_t i, size_t j) {
        return amplitudes[i * grid2.count + j];
    }
    const std::complex<double>& at(size_t i, size_t j) const {
        return amplitudes[i * grid2.count + j];
    }
};

// Norm captured by the grid before renormalization. truncated flips when
// more than 1e-6 of the probability fell outside the sampled window.
struct SampleInfo {
    double captured_norm{0.0};
    bool   truncated{false};
};

// Sample a shape on a grid and rescale to unit discrete norm. info, when
// given, receives the raw captured norm so callers can audit truncation.
SampledWavefunction sample(const shapes::ShapeSpec& shape, const Grid& grid,
                           Domain domain, SampleInfo* info = nullptr);

// Trapezoid-rule L2 norm and inner product Int a(x) conj(b(x)) dx.
double l2_norm(const SampledWavefunction& wf);
std::complex<double> inner_product(const SampledWavefunction& a,
                                   const SampledWavefunction& b);

SampledWavefunction normalized(SampledWavefunction wf);

// Change of domain under psi(t) = (2 pi)^{-1/2} Int psi(w) e^{-iwt} dw and
// its inverse, evaluated on grid.conjugate(). Phase factors account for the
// off-origin grid starts, so the result approximates the continuum
// transform, not a bare DFT.
SampledWavefunction dft_to_conjugate(const SampledWavefunction& wf);

struct Moments {
    double mean{0.0};
    double rms_width{0.0};
};

// Mean and RMS width of the density |psi|^2.
Moments moments(const SampledWavefunction& wf);

// Full width at half maximum of ys over xs, where "half" is the midpoint
// between the curve's extreme values, so the same routine serves density
// peaks and coincidence dips. Requires a unique interior global extremum;
// crossings are located by linear interpolation.
double fwhm(std::span<const double> xs, std::span<const double> ys);

// Controls automatic grid sizing: span_factor scale widths of coverage,
// step_factor samples across the narrowest scale width.
struct GridFactors {
    double span_factor{8.0};
    double step_factor{8.0};
};

// Central new_count samples around the x = 0 sample.
SampledWavefunction crop_centered(const SampledWavefunction& wf,
                                  size_t new_count);

} // namespace sampling
} // namespace combhom
