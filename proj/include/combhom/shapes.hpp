// shapes.hpp: analytic line/envelope shapes, their Fourier partners and widths.
#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace combhom {

inline constexpr double two_pi = 6.283185307179586476925286766559;

namespace shapes {

enum class Kind { gaussian, rectangle, sinc };

std::string to_string(Kind k);

// width is the RMS width of |f|^2 for gaussian, the full support for
// rectangle, and for sinc the support of the conjugate rectangle it is
// paired with (so partners share the same width parameter).
struct ShapeSpec {
    Kind   kind{Kind::gaussian};
    double width{1.0};
    double center{0.0};
};

void validate(const ShapeSpec& s);

// Unit L2 norm closed forms. Rectangle edges return half the interior
// value (midpoint convention, keeps the sampled DFT second order).
double evaluate_at(const ShapeSpec& s, double x);
std::vector<std::complex<double>> evaluate(const ShapeSpec& s,
                                           std::span<const double> points);

// RMS width of |f|^2 about its mean. Divergent for sinc; returns +inf.
double rms_width(const ShapeSpec& s);
bool has_finite_rms(Kind k);

// FWHM of |f(x)|^2.
double density_fwhm(const ShapeSpec& s);

// Width used by scale bookkeeping: RMS where finite, otherwise the
// gaussian-equivalent proxy FWHM / (2 sqrt(2 ln 2)).
double scale_width(const ShapeSpec& s);

// Conjugate-domain partner under psi(t) = (2pi)^{-1/2} Int psi(w) e^{-iwt} dw.
// gaussian(s) <-> gaussian(1/(2s)), rectangle(W) <-> sinc(W). A nonzero
// center becomes a phase ramp: value(x) = shape(x) * exp(-i*phase_ramp*x).
struct FourierPartner {
    ShapeSpec shape;
    double    phase_ramp{0.0};
};

FourierPartner fourier_partner(const ShapeSpec& s);
std::complex<double> partner_at(const FourierPartner& p, double x);

// Closed-form autocorrelation F(d) = Int f(x) f*(x-d) dx of the unit-norm
// shape. Real, even, center independent: gaussian -> exp(-d^2/(8 s^2)),
// rectangle -> triangle 1-|d|/W, sinc -> sinc(W d / 2).
double autocorrelation_at(const ShapeSpec& s, double delta);

// Radius around the center beyond which |f| stays below eps * max|f|.
// Used for tooth enumeration and local-support evaluation. For sinc the
// 1/x envelope gives radius 2/(W*eps).
double support_radius(const ShapeSpec& s, double eps);

} // namespace shapes
} // namespace combhom
