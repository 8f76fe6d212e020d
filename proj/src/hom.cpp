#include "combhom/hom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "combhom/errors.hpp"
#include "parallel.hpp"

namespace combhom {
namespace hom {

sampling::Grid entangled_overlap_grid(const states::EntangledSpec& spec,
                                      double max_abs_delta_t,
                                      const sampling::GridFactors& factors) {
    states::validate(spec);
    if (!std::isfinite(max_abs_delta_t) || max_abs_delta_t < 0.0)
        throw std::invalid_argument(
            "entangled overlap: largest delay must be finite and "
            "non-negative");
    const shapes::FourierPartner eta = shapes::fourier_partner(spec.envelope);
    const double dt_eta = shapes::scale_width(eta.shape);
    const double step   = dt_eta / factors.step_factor;
    const double half = 0.5 * factors.span_factor * dt_eta +
                        2.0 * max_abs_delta_t;
    const double needed = 2.0 * half / step + 1.0;
    if (needed > double(1 << 22))
        throw std::invalid_argument(
            "entangled overlap: integration grid would exceed 2^22 samples");
    return sampling::Grid::centered(step, size_t(std::ceil(needed)));
}

namespace {

using sampling::Grid;
using sampling::SampledWavefunction;
using shapes::FourierPartner;
using shapes::ShapeSpec;

double weight(size_t i, size_t count) {
    return (i == 0 || i + 1 == count) ? 0.5 : 1.0;
}

double checked(double c) {
    if (!(c > -1e-9) || !(c < 1.0 + 1e-9))
        throw ConsistencyError("coincidence probability outside [0, 1]: " +
                               std::to_string(c));
    return c;
}

void validate_shift(const Shift& s) {
    if (!std::isfinite(s.delta_t) || !std::isfinite(s.delta_omega))
        throw std::invalid_argument("shift: must be finite");
}

// Range beyond which the closed-form autocorrelation of the shape is
// negligible. Sinc autocorrelations decay like 1/x, so their reach is set
// by a fixed tail budget instead of an amplitude threshold; symmetric
// partial sums cancel the slow tails pairwise.
double autocorr_reach(const ShapeSpec& s) {
    switch (s.kind) {
        case shapes::Kind::gaussian:  return 17.0 * s.width;
        case shapes::Kind::rectangle: return s.width;
        case shapes::Kind::sinc:      return 2e5 / s.width;
    }
    throw std::invalid_argument("shape kind: unknown enum value");
}

// S(x) = sum_m e^{-i ramp (x + mP)} F(x + mP) over the revivals that the
// reach keeps, with F the closed-form autocorrelation of shape.
std::complex<double> periodic_autocorr_sum(const ShapeSpec& shape,
                                           double ramp, double period,
                                           double x) {
    double reach = autocorr_reach(shape);
    long   m_lo  = long(std::ceil((-reach - x) / period));
    long   m_hi  = long(std::floor((reach - x) / period));
    std::complex<double> acc = 0.0;
    for (long m = m_lo; m <= m_hi; ++m) {
        double d = x + double(m) * period;
        double f = shapes::autocorrelation_at(shape, d);
        acc += ramp == 0.0 ? std::complex<double>(f, 0.0)
                           : std::polar(f, -ramp * d);
    }
    return acc;
}

// Temporal autocorrelation magnitude of a spectral shape's partner.
double partner_autocorr_abs(const ShapeSpec& spectral_shape, double delta) {
    return std::abs(shapes::autocorrelation_at(
        shapes::fourier_partner(spectral_shape).shape, delta));
}

// Exact comb overlaps. Holds the spectral state and its DFT image; 1D dips
// reduce to phased sums over one density, the 2D surface needs one inverse
// transform per delay.
class CombOverlap {
  public:
    CombOverlap(const states::CombSpec& spec,
                const sampling::GridFactors& factors)
        : spectral_(states::build_comb_spectral(spec, factors)),
          temporal_(sampling::normalized(sampling::dft_to_conjugate(spectral_))) {
        cache_density(spectral_, spectral_density_);
        cache_density(temporal_, temporal_density_);
    }

    double time_dip(double delta_t) const {
        std::complex<double> v = 0.0;
        const Grid&          g = spectral_.grid;
        for (size_t k = 0; k < g.count; ++k)
            v += spectral_density_[k] * std::polar(1.0, -g.at(k) * delta_t);
        return checked(0.5 - 0.5 * std::norm(v));
    }

    double freq_dip(double delta_omega) const {
        std::complex<double> v = 0.0;
        const Grid&          g = temporal_.grid;
        for (size_t j = 0; j < g.count; ++j)
            v += temporal_density_[j] * std::polar(1.0, g.at(j) * delta_omega);
        return checked(0.5 - 0.5 * std::norm(v));
    }

    void surface_row(double delta_t, std::span<const double> delta_omegas,
                     double* out) const {
        SampledWavefunction delayed = spectral_;
        const Grid&         gw      = spectral_.grid;
        for (size_t k = 0; k < gw.count; ++k)
            delayed.amplitudes[k] *= std::polar(1.0, gw.at(k) * delta_t);
        SampledWavefunction b = sampling::dft_to_conjugate(delayed);

        const Grid& gt = temporal_.grid;
        std::vector<std::complex<double>> profile(gt.count);
        for (size_t j = 0; j < gt.count; ++j)
            profile[j] = weight(j, gt.count) * gt.step *
                         temporal_.amplitudes[j] * std::conj(b.amplitudes[j]);

        for (size_t i = 0; i < delta_omegas.size(); ++i) {
            std::complex<double> v = 0.0;
            for (size_t j = 0; j < gt.count; ++j)
                v += profile[j] * std::polar(1.0, gt.at(j) * delta_omegas[i]);
            out[i] = checked(0.5 - 0.5 * std::norm(v));
        }
    }

  private:
    static void cache_density(const SampledWavefunction& wf,
                              std::vector<double>& density) {
        density.resize(wf.grid.count);
        for (size_t i = 0; i < wf.grid.count; ++i)
            density[i] =
                weight(i, wf.grid.count) * wf.grid.step * std::norm(wf.amplitudes[i]);
    }

    SampledWavefunction spectral_;
    SampledWavefunction temporal_;
    std::vector<double> spectral_density_;
    std::vector<double> temporal_density_;
};

// Exact entangled coincidences: the pair reduces to a 1D integral over the
// temporal envelope partner, evaluated analytically on a grid sized for
// the largest delay in the scan.
class EntangledOverlap {
  public:
    EntangledOverlap(const states::EntangledSpec& spec,
                     const sampling::GridFactors& factors, double max_abs_dt)
        : eta_(shapes::fourier_partner(spec.envelope)) {
        grid_ = entangled_overlap_grid(spec, max_abs_dt, factors);
        eta_u_.resize(grid_.count);
        for (size_t j = 0; j < grid_.count; ++j)
            eta_u_[j] = shapes::partner_at(eta_, grid_.at(j));
    }

    double eval(const Shift& shift) const {
        std::complex<double> v = 0.0;
        for (size_t j = 0; j < grid_.count; ++j) {
            double u = grid_.at(j);
            std::complex<double> mirrored =
                shapes::partner_at(eta_, -u - 2.0 * shift.delta_t);
            v += weight(j, grid_.count) * eta_u_[j] * std::conj(mirrored) *
                 std::polar(1.0, -u * shift.delta_omega);
        }
        v *= grid_.step;
        return checked(0.5 - 0.5 * v.real());
    }

  private:
    FourierPartner                    eta_;
    Grid                              grid_;
    std::vector<std::complex<double>> eta_u_;
};

} // namespace

sampling::SampledWavefunction apply_shift(
    const sampling::SampledWavefunction& wf, const Shift& shift) {
    validate_shift(shift);
    sampling::validate(wf.grid);

    auto delay_phase = [&](SampledWavefunction& spectral) {
        for (size_t k = 0; k < spectral.grid.count; ++k)
            spectral.amplitudes[k] *=
                std::polar(1.0, spectral.grid.at(k) * shift.delta_t);
    };
    auto modulate = [&](SampledWavefunction& temporal) {
        for (size_t j = 0; j < temporal.grid.count; ++j)
            temporal.amplitudes[j] *=
                std::polar(1.0, temporal.grid.at(j) * shift.delta_omega);
    };

    if (wf.domain == sampling::Domain::time) {
        SampledWavefunction spectral = sampling::dft_to_conjugate(wf);
        delay_phase(spectral);
        SampledWavefunction out = sampling::dft_to_conjugate(spectral);
        modulate(out);
        return out;
    }
    SampledWavefunction spectral = wf;
    delay_phase(spectral);
    SampledWavefunction temporal = sampling::dft_to_conjugate(spectral);
    modulate(temporal);
    return sampling::dft_to_conjugate(temporal);
}

double coincidence_product(const sampling::SampledWavefunction& a,
                           const sampling::SampledWavefunction& b,
                           const Shift& shift) {
    validate_shift(shift);
    if (a.domain != sampling::Domain::time ||
        b.domain != sampling::Domain::time)
        throw std::invalid_argument(
            "coincidence: both states must be in the time domain");
    if (a.grid.start != b.grid.start || a.grid.step != b.grid.step ||
        a.grid.count != b.grid.count)
        throw std::invalid_argument("coincidence: grids differ");

    SampledWavefunction delayed = apply_shift(b, {shift.delta_t, 0.0});
    std::complex<double> v = 0.0;
    for (size_t j = 0; j < a.grid.count; ++j)
        v += weight(j, a.grid.count) * a.amplitudes[j] *
             std::conj(delayed.amplitudes[j]) *
             std::polar(1.0, a.grid.at(j) * shift.delta_omega);
    v *= a.grid.step;
    return checked(0.5 - 0.5 * std::norm(v));
}

double coincidence_entangled(const states::EntangledSpec& spec,
                             const Shift& shift,
                             const sampling::GridFactors& factors) {
    validate_shift(shift);
    EntangledOverlap overlap(spec, factors, std::abs(shift.delta_t));
    return overlap.eval(shift);
}

std::vector<std::complex<double>> autocorrelation(
    const sampling::SampledWavefunction& wf, std::span<const double> shifts) {
    SampledWavefunction conj_wf = sampling::dft_to_conjugate(wf);
    const Grid&         g       = conj_wf.grid;
    std::vector<double> density(g.count);
    for (size_t k = 0; k < g.count; ++k)
        density[k] = weight(k, g.count) * g.step * std::norm(conj_wf.amplitudes[k]);

    double sign = wf.domain == sampling::Domain::time ? -1.0 : +1.0;
    std::vector<std::complex<double>> out(shifts.size());
    for (size_t i = 0; i < shifts.size(); ++i) {
        std::complex<double> acc = 0.0;
        for (size_t k = 0; k < g.count; ++k)
            acc += density[k] * std::polar(1.0, sign * g.at(k) * shifts[i]);
        out[i] = acc;
    }
    return out;
}

double approx_comb_time_dip(const states::CombSpec& spec, double delta_t) {
    states::validate(spec);
    if (!std::isfinite(delta_t))
        throw std::invalid_argument("delta_t: must be finite");
    double period = two_pi / spec.omega_spacing;
    ShapeSpec eta_t = shapes::fourier_partner(spec.envelope).shape;
    double    line  = partner_autocorr_abs(spec.line_shape, delta_t);
    std::complex<double> s =
        periodic_autocorr_sum(eta_t, spec.envelope.center, period, delta_t);
    std::complex<double> s0 =
        periodic_autocorr_sum(eta_t, spec.envelope.center, period, 0.0);
    if (!(std::norm(s0) > 0.0))
        throw ConsistencyError("approx time dip: degenerate revival sum");
    return checked(0.5 - 0.5 * line * line * std::norm(s) / std::norm(s0));
}

double approx_comb_freq_dip(const states::CombSpec& spec,
                            double delta_omega) {
    states::validate(spec);
    if (!std::isfinite(delta_omega))
        throw std::invalid_argument("delta_omega: must be finite");
    double envelope = std::abs(
        shapes::autocorrelation_at(spec.envelope, delta_omega));
    std::complex<double> s = periodic_autocorr_sum(
        spec.line_shape, 0.0, spec.omega_spacing, delta_omega);
    std::complex<double> s0 =
        periodic_autocorr_sum(spec.line_shape, 0.0, spec.omega_spacing, 0.0);
    if (!(std::norm(s0) > 0.0))
        throw ConsistencyError("approx frequency dip: degenerate line sum");
    return checked(0.5 -
                   0.5 * envelope * envelope * std::norm(s) / std::norm(s0));
}

double approx_comb_time_dip_narrow(const states::CombSpec& spec,
                                   double delta_t) {
    states::validate(spec);
    double period = two_pi / spec.omega_spacing;
    if (!(std::abs(delta_t) <= 0.5 * period))
        throw std::domain_error(
            "narrow time dip: delay exceeds half a period");
    double line = partner_autocorr_abs(spec.line_shape, delta_t);
    double env  = partner_autocorr_abs(spec.envelope, delta_t);
    return checked(0.5 - 0.5 * line * line * env * env);
}

double approx_comb_freq_dip_narrow(const states::CombSpec& spec,
                                   double delta_omega) {
    states::validate(spec);
    if (!(std::abs(delta_omega) <= 0.5 * spec.omega_spacing))
        throw std::domain_error(
            "narrow frequency dip: offset exceeds half a spacing");
    double env = std::abs(
        shapes::autocorrelation_at(spec.envelope, delta_omega));
    double line = std::abs(
        shapes::autocorrelation_at(spec.line_shape, delta_omega));
    return checked(0.5 - 0.5 * env * env * line * line);
}

double approx_comb_2d_dip(const states::CombSpec& spec, const Shift& shift) {
    states::validate(spec);
    validate_shift(shift);
    double period = two_pi / spec.omega_spacing;
    if (!(std::abs(shift.delta_t) <= 0.5 * period) ||
        !(std::abs(shift.delta_omega) <= 0.5 * spec.omega_spacing))
        throw std::domain_error(
            "2d dip: shift exceeds half a period or half a spacing");
    double line = std::abs(
        shapes::autocorrelation_at(spec.line_shape, shift.delta_omega));
    double env = partner_autocorr_abs(spec.envelope, shift.delta_t);
    return checked(0.5 - 0.5 * line * line * env * env);
}

bool approx_2d_valid(const states::CombSpec& spec, const Shift& shift) {
    states::validate(spec);
    double period = two_pi / spec.omega_spacing;
    return std::abs(shift.delta_t) <= period / 8.0 + 1e-12 &&
           std::abs(shift.delta_omega) <= spec.omega_spacing / 8.0 + 1e-12;
}

double approx_entangled_2d_dip(const states::EntangledSpec& spec,
                               const Shift& shift) {
    states::validate(spec);
    validate_shift(shift);
    FourierPartner eta = shapes::fourier_partner(spec.envelope);
    double d = 2.0 * shift.delta_t;
    double f = shapes::autocorrelation_at(eta.shape, d);
    double re = eta.phase_ramp == 0.0 ? f : f * std::cos(eta.phase_ramp * d);
    return checked(0.5 - 0.5 * re);
}

std::string to_string(Method m) {
    switch (m) {
        case Method::exact_overlap:  return "exact_overlap";
        case Method::approx_formula: return "approx_formula";
        case Method::oracle_2d:      return "oracle_2d";
    }
    throw std::invalid_argument("method: unknown enum value");
}

std::string to_string(StateKind k) {
    switch (k) {
        case StateKind::comb:      return "comb";
        case StateKind::entangled: return "entangled";
    }
    throw std::invalid_argument("state kind: unknown enum value");
}

std::string to_string(ShiftAxis a) {
    switch (a) {
        case ShiftAxis::time:      return "time";
        case ShiftAxis::frequency: return "frequency";
    }
    throw std::invalid_argument("shift axis: unknown enum value");
}

StateKind state_kind_of(const StateSpec& spec) {
    return std::holds_alternative<states::CombSpec>(spec)
               ? StateKind::comb
               : StateKind::entangled;
}

namespace {

void validate_shifts(std::span<const double> shifts, const char* what) {
    if (shifts.empty())
        throw std::invalid_argument(std::string(what) + ": empty shift list");
    for (double s : shifts)
        if (!std::isfinite(s))
            throw std::invalid_argument(std::string(what) +
                                        ": shifts must be finite");
}

double max_abs(std::span<const double> xs) {
    double m = 0.0;
    for (double x : xs) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

DipCurve scan_1d(const StateSpec& spec, ShiftAxis axis,
                 std::span<const double> shifts, Method method,
                 const ScanOptions& options) {
    validate_shifts(shifts, "scan_1d");
    if (method == Method::oracle_2d)
        throw std::invalid_argument(
            "scan_1d: the two-photon oracle runs through the oracle module");

    DipCurve curve;
    curve.state_kind = state_kind_of(spec);
    curve.method     = method;
    curve.axis       = axis;
    curve.shifts.assign(shifts.begin(), shifts.end());
    curve.coincidence.resize(shifts.size());
    double* out = curve.coincidence.data();

    if (const auto* comb = std::get_if<states::CombSpec>(&spec)) {
        if (method == Method::exact_overlap) {
            CombOverlap overlap(*comb, options.grid_factors);
            par::parallel_for(shifts.size(), options.threads, [&](size_t i) {
                out[i] = axis == ShiftAxis::time ? overlap.time_dip(shifts[i])
                                                 : overlap.freq_dip(shifts[i]);
            });
        } else {
            par::parallel_for(shifts.size(), options.threads, [&](size_t i) {
                out[i] = axis == ShiftAxis::time
                             ? approx_comb_time_dip(*comb, shifts[i])
                             : approx_comb_freq_dip(*comb, shifts[i]);
            });
        }
        return curve;
    }

    const auto& pair = std::get<states::EntangledSpec>(spec);
    if (method == Method::exact_overlap) {
        double max_dt = axis == ShiftAxis::time ? max_abs(shifts) : 0.0;
        EntangledOverlap overlap(pair, options.grid_factors, max_dt);
        par::parallel_for(shifts.size(), options.threads, [&](size_t i) {
            Shift s = axis == ShiftAxis::time ? Shift{shifts[i], 0.0}
                                              : Shift{0.0, shifts[i]};
            out[i] = overlap.eval(s);
        });
    } else {
        par::parallel_for(shifts.size(), options.threads, [&](size_t i) {
            Shift s = axis == ShiftAxis::time ? Shift{shifts[i], 0.0}
                                              : Shift{0.0, shifts[i]};
            out[i] = approx_entangled_2d_dip(pair, s);
        });
    }
    return curve;
}

DipSurface scan_2d(const StateSpec& spec, std::span<const double> delta_ts,
                   std::span<const double> delta_omegas, Method method,
                   const ScanOptions& options) {
    validate_shifts(delta_ts, "scan_2d delta_t");
    validate_shifts(delta_omegas, "scan_2d delta_omega");
    if (method == Method::oracle_2d)
        throw std::invalid_argument(
            "scan_2d: the two-photon oracle runs through the oracle module");

    DipSurface surface;
    surface.state_kind = state_kind_of(spec);
    surface.method     = method;
    surface.delta_ts.assign(delta_ts.begin(), delta_ts.end());
    surface.delta_omegas.assign(delta_omegas.begin(), delta_omegas.end());
    surface.coincidence.resize(delta_ts.size() * delta_omegas.size());
    double* out = surface.coincidence.data();
    size_t  nw  = delta_omegas.size();

    if (const auto* comb = std::get_if<states::CombSpec>(&spec)) {
        if (method == Method::exact_overlap) {
            CombOverlap overlap(*comb, options.grid_factors);
            par::parallel_for(delta_ts.size(), options.threads, [&](size_t r) {
                overlap.surface_row(delta_ts[r], delta_omegas, out + r * nw);
            });
        } else {
            par::parallel_for(delta_ts.size(), options.threads, [&](size_t r) {
                for (size_t c = 0; c < nw; ++c)
                    out[r * nw + c] = approx_comb_2d_dip(
                        *comb, {delta_ts[r], delta_omegas[c]});
            });
        }
        return surface;
    }

    const auto& pair = std::get<states::EntangledSpec>(spec);
    if (method == Method::exact_overlap) {
        EntangledOverlap overlap(pair, options.grid_factors,
                                 max_abs(delta_ts));
        par::parallel_for(delta_ts.size(), options.threads, [&](size_t r) {
            for (size_t c = 0; c < nw; ++c)
                out[r * nw + c] =
                    overlap.eval({delta_ts[r], delta_omegas[c]});
        });
    } else {
        par::parallel_for(delta_ts.size(), options.threads, [&](size_t r) {
            for (size_t c = 0; c < nw; ++c)
                out[r * nw + c] = approx_entangled_2d_dip(
                    pair, {delta_ts[r], delta_omegas[c]});
        });
    }
    return surface;
}

} // namespace hom
} // namespace combhom
