#include "combhom/shapes.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace combhom {
namespace shapes {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// 2 sqrt(2 ln 2): FWHM of a unit-sigma gaussian density.
constexpr double fwhm_per_sigma = 2.35482004503095;

// Positive root of sinc(u)^2 = 1/2, fixes the sinc density FWHM.
constexpr double sinc_half_max = 1.39155737825151;

double sinc(double u) {
    if (std::abs(u) < 1e-4) {
        double u2 = u * u;
        return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
    }
    return std::sin(u) / u;
}

} // namespace

std::string to_string(Kind k) {
    switch (k) {
        case Kind::gaussian:  return "gaussian";
        case Kind::rectangle: return "rectangle";
        case Kind::sinc:      return "sinc";
    }
    throw std::invalid_argument("shape kind: unknown enum value");
}

void validate(const ShapeSpec& s) {
    if (!(s.width > 0.0) || !std::isfinite(s.width))
        throw std::invalid_argument("shape width: must be positive and finite");
    if (!std::isfinite(s.center))
        throw std::invalid_argument("shape center: must be finite");
}

double evaluate_at(const ShapeSpec& s, double x) {
    double u = x - s.center;
    switch (s.kind) {
        case Kind::gaussian: {
            double sig2 = s.width * s.width;
            return std::pow(two_pi * sig2, -0.25) *
                   std::exp(-u * u / (4.0 * sig2));
        }
        case Kind::rectangle: {
            double amp  = 1.0 / std::sqrt(s.width);
            double half = 0.5 * s.width;
            double d    = std::abs(u);
            if (d < half) return amp;
            if (d == half) return 0.5 * amp;
            return 0.0;
        }
        case Kind::sinc:
            return std::sqrt(s.width / two_pi) * sinc(0.5 * s.width * u);
    }
    throw std::invalid_argument("shape kind: unknown enum value");
}

std::vector<std::complex<double>> evaluate(const ShapeSpec& s,
                                           std::span<const double> points) {
    validate(s);
    std::vector<std::complex<double>> out(points.size());
    for (size_t i = 0; i < points.size(); ++i)
        out[i] = evaluate_at(s, points[i]);
    return out;
}

bool has_finite_rms(Kind k) { return k != Kind::sinc; }

double rms_width(const ShapeSpec& s) {
    switch (s.kind) {
        case Kind::gaussian:  return s.width;
        case Kind::rectangle: return s.width / std::sqrt(12.0);
        case Kind::sinc:      return inf;
    }
    throw std::invalid_argument("shape kind: unknown enum value");
}

double density_fwhm(const ShapeSpec& s) {
    switch (s.kind) {
        case Kind::gaussian:  return fwhm_per_sigma * s.width;
        case Kind::rectangle: return s.width;
        case Kind::sinc:      return 4.0 * sinc_half_max / s.width;
    }
    throw std::invalid_argument("shape kind: unknown enum value");
}

double scale_width(const ShapeSpec& s) {
    if (has_finite_rms(s.kind)) return rms_width(s);
    return density_fwhm(s) / fwhm_per_sigma;
}

FourierPartner fourier_partner(const ShapeSpec& s) {
    validate(s);
    ShapeSpec p;
    p.center = 0.0;
    switch (s.kind) {
        case Kind::gaussian:
            p.kind  = Kind::gaussian;
            p.width = 1.0 / (2.0 * s.width);
            break;
        case Kind::rectangle:
            p.kind  = Kind::sinc;
            p.width = s.width;
            break;
        case Kind::sinc:
            p.kind  = Kind::rectangle;
            p.width = s.width;
            break;
    }
    return {p, s.center};
}

std::complex<double> partner_at(const FourierPartner& p, double x) {
    double mag = evaluate_at(p.shape, x);
    if (p.phase_ramp == 0.0) return {mag, 0.0};
    return std::polar(mag, -p.phase_ramp * x);
}

double autocorrelation_at(const ShapeSpec& s, double delta) {
    double d = std::abs(delta);
    switch (s.kind) {
        case Kind::gaussian:
            return std::exp(-d * d / (8.0 * s.width * s.width));
        case Kind::rectangle:
            return std::max(0.0, 1.0 - d / s.width);
        case Kind::sinc:
            return sinc(0.5 * s.width * d);
    }
    throw std::invalid_argument("shape kind: unknown enum value");
}

double support_radius(const ShapeSpec& s, double eps) {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::invalid_argument("support eps: must lie in (0, 1)");
    switch (s.kind) {
        case Kind::gaussian:
            return 2.0 * s.width * std::sqrt(std::log(1.0 / eps));
        case Kind::rectangle:
            return 0.5 * s.width;
        case Kind::sinc:
            // |sin(u)/u| <= 1/|u|, so the envelope falls below eps once
            // |u| = W, |x| >= 1/eps.
            return 2.0 / (s.width * eps);
    }
    throw std::invalid_argument("shape kind: unknown enum value");
}

} // namespace shapes
} // namespace combhom
