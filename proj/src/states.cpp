#include "combhom/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace combhom {
namespace states {

namespace {

using sampling::Grid;
using sampling::SampledWavefunction;
using sampling::SampledWavefunction2D;
using shapes::FourierPartner;
using shapes::ShapeSpec;

size_t next_pow2(double n) {
    size_t p = 1;
    while (double(p) < n) p <<= 1;
    return p;
}

// Index range [lo, hi) of grid samples within radius of center.
std::pair<size_t, size_t> index_window(const Grid& g, double center,
                                       double radius) {
    if (std::isinf(radius)) return {0, g.count};
    double lo = std::ceil((center - radius - g.start) / g.step);
    double hi = std::floor((center + radius - g.start) / g.step) + 1.0;
    lo = std::clamp(lo, 0.0, double(g.count));
    hi = std::clamp(hi, 0.0, double(g.count));
    return {size_t(lo), size_t(hi)};
}

// Evaluation radius that keeps truncation at the rounding floor. Sinc tails
// decay too slowly to window, so those are evaluated on the whole grid.
double local_radius(const ShapeSpec& s) {
    if (s.kind == shapes::Kind::sinc)
        return std::numeric_limits<double>::infinity();
    return shapes::support_radius(s, 1e-16);
}

void validate_factors(const sampling::GridFactors& f) {
    if (!(f.span_factor > 0.0) || !std::isfinite(f.span_factor))
        throw std::invalid_argument("span_factor: must be positive and finite");
    if (!(f.step_factor > 0.0) || !std::isfinite(f.step_factor))
        throw std::invalid_argument("step_factor: must be positive and finite");
}

struct CombWidths {
    double domega_phi, domega_eta, dt_phi, dt_eta;
};

CombWidths widths_of(const ShapeSpec& line, const ShapeSpec& envelope) {
    return {shapes::scale_width(line), shapes::scale_width(envelope),
            shapes::scale_width(shapes::fourier_partner(line).shape),
            shapes::scale_width(shapes::fourier_partner(envelope).shape)};
}

} // namespace

void validate(const CombSpec& spec) {
    if (!(spec.omega_spacing > 0.0) || !std::isfinite(spec.omega_spacing))
        throw std::invalid_argument(
            "omega_spacing: must be positive and finite");
    shapes::validate(spec.line_shape);
    shapes::validate(spec.envelope);
    if (!(spec.tooth_cutoff > 0.0) || !(spec.tooth_cutoff < 1.0))
        throw std::invalid_argument("tooth_cutoff: must lie in (0, 1)");
}

void validate(const EntangledSpec& spec) {
    shapes::validate(spec.line_shape);
    shapes::validate(spec.envelope);
    if (!std::isfinite(spec.reference_omega))
        throw std::invalid_argument("reference_omega: must be finite");
}

ScaleReport check_scales(const CombSpec& spec) {
    validate(spec);
    CombWidths  w = widths_of(spec.line_shape, spec.envelope);
    double      T = two_pi / spec.omega_spacing;
    ScaleReport r;
    r.domega_phi = w.domega_phi;
    r.domega_eta = w.domega_eta;
    r.dt_phi     = w.dt_phi;
    r.dt_eta     = w.dt_eta;
    r.omega_spacing = spec.omega_spacing;
    r.period        = T;
    r.frequency_ordering_ok =
        w.domega_phi < spec.omega_spacing && spec.omega_spacing < w.domega_eta;
    r.temporal_ordering_ok = w.dt_eta < T && T < w.dt_phi;
    r.uncertainty_product  = w.domega_phi * w.dt_eta;
    r.bound_ok             = r.uncertainty_product < two_pi;
    return r;
}

ScaleReport check_scales(const EntangledSpec& spec) {
    validate(spec);
    CombWidths  w = widths_of(spec.line_shape, spec.envelope);
    ScaleReport r;
    r.domega_phi = w.domega_phi;
    r.domega_eta = w.domega_eta;
    r.dt_phi     = w.dt_phi;
    r.dt_eta     = w.dt_eta;
    r.omega_spacing = 0.0;
    r.period        = std::numeric_limits<double>::infinity();
    r.frequency_ordering_ok = w.domega_phi < w.domega_eta;
    r.temporal_ordering_ok  = w.dt_eta < w.dt_phi;
    r.uncertainty_product   = w.domega_phi * w.dt_eta;
    r.bound_ok              = r.uncertainty_product < two_pi;
    return r;
}

sampling::Grid spectral_grid(const CombSpec& spec,
                             const sampling::GridFactors& factors) {
    validate(spec);
    validate_factors(factors);
    CombWidths w = widths_of(spec.line_shape, spec.envelope);

    // The step must resolve the line and keep the conjugate span ahead of
    // the temporal envelope; the span must hold every tooth with its tails.
    double step = std::min(w.domega_phi / factors.step_factor,
                           two_pi / (factors.span_factor * w.dt_phi));
    double half =
        std::max(0.5 * factors.span_factor * w.domega_eta,
                 shapes::support_radius(spec.envelope, spec.tooth_cutoff) +
                     shapes::support_radius(spec.line_shape, spec.tooth_cutoff));

    double needed = 2.0 * half / step;
    if (needed > double(1 << 24))
        throw std::invalid_argument(
            "spectral grid: would exceed 2^24 samples; widen tooth_cutoff or "
            "relax grid factors");
    return Grid::centered(step, next_pow2(needed));
}

sampling::Grid entangled_time_grid(const EntangledSpec& spec,
                                   const sampling::GridFactors& factors) {
    validate(spec);
    validate_factors(factors);
    CombWidths w = widths_of(spec.line_shape, spec.envelope);

    double step = w.dt_eta / factors.step_factor;
    double half = 0.5 * factors.span_factor * w.dt_phi;
    size_t count = next_pow2(2.0 * half / step);
    if (count > entangled_axis_cap)
        throw std::invalid_argument(
            "entangled grid: would exceed the per-axis cap; relax grid "
            "factors");
    return Grid::centered(step, count);
}

sampling::SampledWavefunction build_comb_spectral(const CombSpec& spec,
                                                  const sampling::Grid& grid) {
    validate(spec);
    sampling::validate(grid);

    double eta_peak =
        std::abs(shapes::evaluate_at(spec.envelope, spec.envelope.center));
    double reach = shapes::support_radius(spec.envelope, spec.tooth_cutoff);
    double c_phi = spec.line_shape.center;
    double c_eta = spec.envelope.center;
    long   n_lo  = long(std::ceil((c_eta - reach - c_phi) / spec.omega_spacing));
    long   n_hi = long(std::floor((c_eta + reach - c_phi) / spec.omega_spacing));

    SampledWavefunction wf;
    wf.domain = sampling::Domain::frequency;
    wf.grid   = grid;
    wf.amplitudes.assign(grid.count, 0.0);

    double tooth_radius = local_radius(spec.line_shape);
    for (long n = n_lo; n <= n_hi; ++n) {
        double center = double(n) * spec.omega_spacing + c_phi;
        double weight =
            std::abs(shapes::evaluate_at(spec.envelope, center));
        if (weight < spec.tooth_cutoff * eta_peak) continue;
        auto [lo, hi] = index_window(grid, center, tooth_radius);
        double offset = double(n) * spec.omega_spacing;
        for (size_t i = lo; i < hi; ++i)
            wf.amplitudes[i] +=
                shapes::evaluate_at(spec.line_shape, grid.at(i) - offset);
    }
    for (size_t i = 0; i < grid.count; ++i)
        wf.amplitudes[i] *= shapes::evaluate_at(spec.envelope, grid.at(i));

    return sampling::normalized(std::move(wf));
}

sampling::SampledWavefunction build_comb_spectral(
    const CombSpec& spec, const sampling::GridFactors& factors) {
    return build_comb_spectral(spec, spectral_grid(spec, factors));
}

sampling::SampledWavefunction build_comb_temporal(
    const CombSpec& spec, const sampling::GridFactors& factors) {
    return sampling::normalized(
        sampling::dft_to_conjugate(build_comb_spectral(spec, factors)));
}

sampling::SampledWavefunction build_comb_temporal_direct(
    const CombSpec& spec, const sampling::Grid& time_grid) {
    validate(spec);
    sampling::validate(time_grid);

    FourierPartner phi_t = shapes::fourier_partner(spec.line_shape);
    FourierPartner eta_t = shapes::fourier_partner(spec.envelope);
    double         T     = two_pi / spec.omega_spacing;

    double weight_peak = std::abs(shapes::evaluate_at(phi_t.shape, 0.0));
    double reach = shapes::support_radius(phi_t.shape, spec.tooth_cutoff);
    long   m_max = long(std::floor(reach / T));

    SampledWavefunction wf;
    wf.domain = sampling::Domain::time;
    wf.grid   = time_grid;
    wf.amplitudes.assign(time_grid.count, 0.0);

    double pulse_radius = local_radius(eta_t.shape);
    for (long m = -m_max; m <= m_max; ++m) {
        double t_m = double(m) * T;
        std::complex<double> weight = shapes::partner_at(phi_t, t_m);
        if (std::abs(weight) < spec.tooth_cutoff * weight_peak) continue;
        auto [lo, hi] = index_window(time_grid, t_m, pulse_radius);
        for (size_t i = lo; i < hi; ++i)
            wf.amplitudes[i] +=
                weight * shapes::partner_at(eta_t, time_grid.at(i) - t_m);
    }
    return sampling::normalized(std::move(wf));
}

sampling::SampledWavefunction2D build_entangled_temporal(
    const EntangledSpec& spec, const sampling::Grid& grid1,
    const sampling::Grid& grid2) {
    validate(spec);
    sampling::validate(grid1);
    sampling::validate(grid2);
    if (grid1.count > entangled_axis_cap || grid2.count > entangled_axis_cap)
        throw std::invalid_argument(
            "entangled table: grid exceeds the per-axis cap");

    FourierPartner phi_t = shapes::fourier_partner(spec.line_shape);
    FourierPartner eta_t = shapes::fourier_partner(spec.envelope);

    SampledWavefunction2D table;
    table.domain = sampling::Domain::time;
    table.grid1  = grid1;
    table.grid2  = grid2;
    table.amplitudes.resize(grid1.count * grid2.count);

    for (size_t i = 0; i < grid1.count; ++i) {
        double t1 = grid1.at(i);
        for (size_t j = 0; j < grid2.count; ++j) {
            double t2 = grid2.at(j);
            std::complex<double> amp =
                shapes::partner_at(eta_t, t1 - t2) *
                shapes::partner_at(phi_t, 0.5 * (t1 + t2));
            if (spec.reference_omega != 0.0)
                amp *= std::polar(1.0, -spec.reference_omega * (t1 + t2));
            table.at(i, j) = amp;
        }
    }

    double norm2 = 0.0;
    for (size_t i = 0; i < grid1.count; ++i) {
        double wi = (i == 0 || i + 1 == grid1.count) ? 0.5 : 1.0;
        double row = 0.0;
        for (size_t j = 0; j < grid2.count; ++j) {
            double wj = (j == 0 || j + 1 == grid2.count) ? 0.5 : 1.0;
            row += wj * std::norm(table.at(i, j));
        }
        norm2 += wi * row;
    }
    norm2 *= grid1.step * grid2.step;
    if (!(norm2 > 0.0))
        throw std::invalid_argument("entangled table: zero norm on the grid");
    double scale = 1.0 / std::sqrt(norm2);
    for (auto& a : table.amplitudes) a *= scale;
    return table;
}

} // namespace states
} // namespace combhom
