// states.hpp: single-photon comb states and entangled two-photon states.
#pragma once

#include "combhom/sampling.hpp"
#include "combhom/shapes.hpp"

namespace combhom {
namespace states {

// Spectral comb psi(w) = eta(w) * sum_n phi(w - n Omega): narrow line_shape
// phi repeated at multiples of omega_spacing under the broad envelope eta.
// Teeth are enumerated while the envelope amplitude at the tooth position
// stays above tooth_cutoff of its peak.
struct CombSpec {
    double            omega_spacing{0.0};
    shapes::ShapeSpec line_shape{};
    shapes::ShapeSpec envelope{};
    double            tooth_cutoff{1e-6};
};

// Time-anticorrelated photon pair
//   psi(t1, t2) = eta_t(t1 - t2) * phi_t((t1 + t2) / 2) * e^{-i wbar (t1+t2)},
// where eta_t and phi_t are the temporal partners of the spectral envelope
// (broad, so eta_t is narrow) and line shape (narrow, so phi_t is broad).
struct EntangledSpec {
    shapes::ShapeSpec line_shape{};
    shapes::ShapeSpec envelope{};
    double            reference_omega{0.0};
};

void validate(const CombSpec& spec);
void validate(const EntangledSpec& spec);

// Characteristic widths and the orderings they must satisfy. For combs the
// line must be narrow against the spacing and the envelope broad against it
// (and mirrored in time against the period); entangled states only need the
// two-sided width orderings. uncertainty_product is domega_phi * dt_eta,
// which stays below 2 pi whenever the orderings hold.
struct ScaleReport {
    double domega_phi{0.0};
    double domega_eta{0.0};
    double dt_eta{0.0};
    double dt_phi{0.0};
    double omega_spacing{0.0};
    double period{0.0};
    bool   frequency_ordering_ok{false};
    bool   temporal_ordering_ok{false};
    double uncertainty_product{0.0};
    bool   bound_ok{false};
};

ScaleReport check_scales(const CombSpec& spec);
ScaleReport check_scales(const EntangledSpec& spec);

// Spectral grid sized for the comb: the step resolves the line shape and
// keeps the conjugate time span ahead of the temporal envelope, the span
// covers every kept tooth. Power-of-two count, centered at zero.
sampling::Grid spectral_grid(const CombSpec& spec,
                             const sampling::GridFactors& factors = {});

// Conjugate-pair time grid for an entangled state: the span covers the
// broad temporal line, the step resolves the narrow temporal envelope.
sampling::Grid entangled_time_grid(const EntangledSpec& spec,
                                   const sampling::GridFactors& factors = {});

// Unit-norm spectral comb on the given (or auto-sized) grid.
sampling::SampledWavefunction build_comb_spectral(const CombSpec& spec,
                                                  const sampling::Grid& grid);
sampling::SampledWavefunction build_comb_spectral(
    const CombSpec& spec, const sampling::GridFactors& factors = {});

// Temporal comb state, canonically through the DFT of the spectral comb.
sampling::SampledWavefunction build_comb_temporal(
    const CombSpec& spec, const sampling::GridFactors& factors = {});

// Independent temporal construction: the pulse train
//   psi(t) = sum_m phi_t(m T) eta_t(t - m T),  T = 2 pi / Omega,
// summed over pulses with |phi_t(m T)| above tooth_cutoff of its peak.
// Agrees with build_comb_temporal pointwise; the DFT route is canonical.
sampling::SampledWavefunction build_comb_temporal_direct(
    const CombSpec& spec, const sampling::Grid& time_grid);

// Per-axis sample cap for entangled tables; keeps them in the tens of MB.
inline constexpr size_t entangled_axis_cap = 1024;

// Unit-norm two-photon table on grid1 x grid2 (t1 rows, t2 columns).
sampling::SampledWavefunction2D build_entangled_temporal(
    const EntangledSpec& spec, const sampling::Grid& grid1,
    const sampling::Grid& grid2);

} // namespace states
} // namespace combhom
