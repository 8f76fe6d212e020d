// hom.hpp: two-photon interference coincidences and dip scans.
#pragma once

#include <complex>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "combhom/sampling.hpp"
#include "combhom/states.hpp"

namespace combhom {
namespace hom {

// Relative delay and frequency offset between the two interferometer arms.
struct Shift {
    double delta_t{0.0};
    double delta_omega{0.0};
};

// Delay by delta_t, then modulate by delta_omega:
//   psi(t) -> psi(t - delta_t) * e^{+i delta_omega t},
// equivalently a spectral shift psi(w) -> psi(w + delta_omega) after the
// delay phase. Works in either domain and returns the same domain.
sampling::SampledWavefunction apply_shift(
    const sampling::SampledWavefunction& wf, const Shift& shift);

// Coincidence probability for independent photons a and b,
//   C = 1/2 - 1/2 |Int a(t) conj(b(t - delta_t)) e^{+i delta_omega t} dt|^2.
// Both states must be sampled on the same time grid.
double coincidence_product(const sampling::SampledWavefunction& a,
                           const sampling::SampledWavefunction& b,
                           const Shift& shift);

// Coincidence probability for the time-anticorrelated pair,
//   C = 1/2 - 1/2 Re Int eta_t(u) conj(eta_t(-u - 2 delta_t))
//                       e^{-i u delta_omega} du,
// with eta_t the temporal envelope partner, integrated on an auto-sized
// grid that resolves eta_t and covers the shifted product.
double coincidence_entangled(const states::EntangledSpec& spec,
                             const Shift& shift,
                             const sampling::GridFactors& factors = {});

// The integration grid coincidence_entangled uses for delays up to
// max_abs_delta_t.
sampling::Grid entangled_overlap_grid(const states::EntangledSpec& spec,
                                      double max_abs_delta_t,
                                      const sampling::GridFactors& factors =
                                          {});

// F(d) = <psi, psi delayed by d> evaluated through the conjugate-domain
// density (time input) or <psi, psi shifted by d> (frequency input).
// F(0) = 1 for unit-norm states.
std::vector<std::complex<double>> autocorrelation(
    const sampling::SampledWavefunction& wf, std::span<const double> shifts);

// Closed-form dip approximations, valid under the comb scale orderings.
// The time dip factorizes into the line-width envelope and a periodic
// train of envelope-width revivals (and mirrored for the frequency dip):
//   C(dt) = 1/2 - 1/2 |A_phi(dt)|^2 |S_eta(dt)|^2 / |S_eta(0)|^2,
//   S_eta(x) = sum_m F_eta(x + m T).
double approx_comb_time_dip(const states::CombSpec& spec, double delta_t);
double approx_comb_freq_dip(const states::CombSpec& spec, double delta_omega);

// Single-revival variants, keeping only the m = 0 term. Only meaningful
// within half a period (resp. half a spacing) of the origin; outside that
// window they throw std::domain_error.
double approx_comb_time_dip_narrow(const states::CombSpec& spec,
                                   double delta_t);
double approx_comb_freq_dip_narrow(const states::CombSpec& spec,
                                   double delta_omega);

// Separable small-shift surface 1/2 - 1/2 |A_phi(dw)|^2 |F_eta(dt)|^2.
// Throws std::domain_error beyond half a period or half a spacing;
// approx_2d_valid marks the T/8, Omega/8 region where the factorization
// holds to scan tolerances.
double approx_comb_2d_dip(const states::CombSpec& spec, const Shift& shift);
bool   approx_2d_valid(const states::CombSpec& spec, const Shift& shift);

// Entangled pair: C = 1/2 - 1/2 Re F_eta(2 delta_t), independent of the
// frequency offset to leading order.
double approx_entangled_2d_dip(const states::EntangledSpec& spec,
                               const Shift& shift);

enum class Method { exact_overlap, approx_formula, oracle_2d };
enum class StateKind { comb, entangled };
enum class ShiftAxis { time, frequency };

std::string to_string(Method m);
std::string to_string(StateKind k);
std::string to_string(ShiftAxis a);

struct DipCurve {
    StateKind           state_kind{};
    Method              method{};
    ShiftAxis           axis{};
    std::vector<double> shifts;
    std::vector<double> coincidence;
};

// Row-major surface, delta_t outer, delta_omega inner.
struct DipSurface {
    StateKind           state_kind{};
    Method              method{};
    std::vector<double> delta_ts;
    std::vector<double> delta_omegas;
    std::vector<double> coincidence;
};

struct ScanOptions {
    sampling::GridFactors grid_factors{};
    size_t                threads{0};
};

using StateSpec = std::variant<states::CombSpec, states::EntangledSpec>;

StateKind state_kind_of(const StateSpec& spec);

// Dip scans with Method::exact_overlap or Method::approx_formula; the
// two-photon oracle runs through its own module. Scans parallelize over
// shifts and are byte-identical for any thread count.
DipCurve scan_1d(const StateSpec& spec, ShiftAxis axis,
                 std::span<const double> shifts, Method method,
                 const ScanOptions& options = {});

DipSurface scan_2d(const StateSpec& spec, std::span<const double> delta_ts,
                   std::span<const double> delta_omegas, Method method,
                   const ScanOptions& options = {});

} // namespace hom
} // namespace combhom
