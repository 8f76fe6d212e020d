#include "combhom/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fft_engine.hpp"

namespace combhom {
namespace sampling {

namespace {

// Trapezoid weight for index i on a count-point grid.
double weight(size_t i, size_t count) {
    return (i == 0 || i + 1 == count) ? 0.5 : 1.0;
}

double density_integral(const Grid& g,
                        std::span<const std::complex<double>> amps) {
    double acc = 0.0;
    for (size_t i = 0; i < amps.size(); ++i)
        acc += weight(i, amps.size()) * std::norm(amps[i]);
    return acc * g.step;
}

} // namespace

Domain conjugate_domain(Domain d) {
    return d == Domain::time ? Domain::frequency : Domain::time;
}

std::vector<double> Grid::points() const {
    std::vector<double> xs(count);
    for (size_t i = 0; i < count; ++i) xs[i] = at(i);
    return xs;
}

Grid Grid::centered(double step, size_t count) {
    Grid g{-step * double(count / 2), step, count};
    validate(g);
    return g;
}

Grid Grid::conjugate() const {
    validate(*this);
    return centered(two_pi / span(), count);
}

void validate(const Grid& g) {
    if (!(g.step > 0.0) || !std::isfinite(g.step))
        throw std::invalid_argument("grid step: must be positive and finite");
    if (g.count == 0) throw std::invalid_argument("grid count: must be nonzero");
    if (!std::isfinite(g.start))
        throw std::invalid_argument("grid start: must be finite");
}

size_t zero_index(const Grid& g) {
    validate(g);
    double idx = -g.start / g.step;
    double nearest = std::round(idx);
    if (nearest < 0.0 || nearest >= double(g.count) ||
        std::abs(idx - nearest) > 1e-9)
        throw std::invalid_argument("grid: does not sample x = 0");
    return size_t(nearest);
}

SampledWavefunction sample(const shapes::ShapeSpec& shape, const Grid& grid,
                           Domain domain, SampleInfo* info) {
    shapes::validate(shape);
    validate(grid);

    SampledWavefunction wf;
    wf.domain = domain;
    wf.grid   = grid;
    wf.amplitudes = shapes::evaluate(shape, grid.points());

    double captured = density_integral(grid, wf.amplitudes);
    if (info) {
        info->captured_norm = captured;
        info->truncated     = (1.0 - captured) > 1e-6;
    }
    if (!(captured > 0.0))
        throw std::invalid_argument("sample: grid captures no probability");

    double scale = 1.0 / std::sqrt(captured);
    for (auto& a : wf.amplitudes) a *= scale;
    return wf;
}

double l2_norm(const SampledWavefunction& wf) {
    return std::sqrt(density_integral(wf.grid, wf.amplitudes));
}

std::complex<double> inner_product(const SampledWavefunction& a,
                                   const SampledWavefunction& b) {
    if (a.domain != b.domain)
        throw std::invalid_argument("inner product: domains differ");
    if (a.grid.start != b.grid.start || a.grid.step != b.grid.step ||
        a.grid.count != b.grid.count)
        throw std::invalid_argument("inner product: grids differ");
    std::complex<double> acc = 0.0;
    for (size_t i = 0; i < a.amplitudes.size(); ++i)
        acc += weight(i, a.amplitudes.size()) * a.amplitudes[i] *
               std::conj(b.amplitudes[i]);
    return acc * a.grid.step;
}

SampledWavefunction normalized(SampledWavefunction wf) {
    double n = l2_norm(wf);
    if (!(n > 0.0))
        throw std::invalid_argument("normalize: wavefunction has zero norm");
    for (auto& a : wf.amplitudes) a /= n;
    return wf;
}

SampledWavefunction dft_to_conjugate(const SampledWavefunction& wf) {
    validate(wf.grid);
    if (wf.amplitudes.size() != wf.grid.count)
        throw std::invalid_argument("dft: amplitude count does not match grid");

    // frequency -> time uses kernel exp(-i w t), time -> frequency its
    // conjugate. The grid-start phases promote the bare DFT to the continuum
    // transform between the two off-origin grids.
    int    sign = wf.domain == Domain::frequency ? -1 : +1;
    Grid   out_grid = wf.grid.conjugate();
    size_t n        = wf.grid.count;

    std::vector<std::complex<double>> phased(n);
    for (size_t k = 0; k < n; ++k) {
        double phase = double(sign) * double(k) * wf.grid.step * out_grid.start;
        phased[k]    = wf.amplitudes[k] * std::polar(1.0, phase);
    }

    SampledWavefunction out;
    out.domain = conjugate_domain(wf.domain);
    out.grid   = out_grid;
    out.amplitudes.resize(n);
    fft::transform(phased, out.amplitudes, sign);

    double scale = wf.grid.step / std::sqrt(two_pi);
    for (size_t j = 0; j < n; ++j) {
        double phase = double(sign) * wf.grid.start * out_grid.at(j);
        out.amplitudes[j] *= scale * std::polar(1.0, phase);
    }
    return out;
}

Moments moments(const SampledWavefunction& wf) {
    double total = 0.0, mean_acc = 0.0;
    for (size_t i = 0; i < wf.amplitudes.size(); ++i) {
        double w = weight(i, wf.amplitudes.size()) * std::norm(wf.amplitudes[i]);
        total += w;
        mean_acc += w * wf.grid.at(i);
    }
    if (!(total > 0.0))
        throw std::invalid_argument("moments: wavefunction has zero norm");
    double mean = mean_acc / total;

    double var_acc = 0.0;
    for (size_t i = 0; i < wf.amplitudes.size(); ++i) {
        double d = wf.grid.at(i) - mean;
        var_acc += weight(i, wf.amplitudes.size()) *
                   std::norm(wf.amplitudes[i]) * d * d;
    }
    return {mean, std::sqrt(var_acc / total)};
}

double fwhm(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("fwhm: xs and ys sizes differ");
    if (xs.size() < 3)
        throw std::invalid_argument("fwhm: need at least three samples");

    size_t imax = 0, imin = 0;
    for (size_t i = 1; i < ys.size(); ++i) {
        if (ys[i] > ys[imax]) imax = i;
        if (ys[i] < ys[imin]) imin = i;
    }
    size_t last = ys.size() - 1;
    bool   max_interior = imax != 0 && imax != last;
    bool   min_interior = imin != 0 && imin != last;

    size_t ext;
    if (max_interior && !min_interior) {
        ext = imax;
    } else if (min_interior && !max_interior) {
        ext = imin;
    } else if (max_interior && min_interior) {
        double edge_avg = 0.5 * (ys.front() + ys.back());
        ext = std::abs(ys[imax] - edge_avg) >= std::abs(ys[imin] - edge_avg)
                  ? imax
                  : imin;
    } else {
        throw std::invalid_argument("fwhm: no interior extremum");
    }
    for (size_t i = 0; i < ys.size(); ++i)
        if (i != ext && ys[i] == ys[ext])
            throw std::invalid_argument("fwhm: extremum is not unique");

    double half = 0.5 * (ys[imax] + ys[imin]);
    bool   peak = ext == imax;

    auto crossed = [&](double y) { return peak ? y <= half : y >= half; };
    auto interpolate = [&](size_t a, size_t b) {
        double denom = ys[b] - ys[a];
        if (denom == 0.0)
            throw std::invalid_argument("fwhm: flat segment at half level");
        return xs[a] + (half - ys[a]) * (xs[b] - xs[a]) / denom;
    };

    double left = 0.0, right = 0.0;
    bool   found = false;
    for (size_t i = ext; i > 0; --i) {
        if (crossed(ys[i - 1])) {
            left  = interpolate(i, i - 1);
            found = true;
            break;
        }
    }
    if (!found) throw std::invalid_argument("fwhm: no crossing left of extremum");
    found = false;
    for (size_t i = ext; i + 1 < ys.size(); ++i) {
        if (crossed(ys[i + 1])) {
            right = interpolate(i, i + 1);
            found = true;
            break;
        }
    }
    if (!found)
        throw std::invalid_argument("fwhm: no crossing right of extremum");
    return right - left;
}

SampledWavefunction crop_centered(const SampledWavefunction& wf,
                                  size_t new_count) {
    if (new_count == 0)
        throw std::invalid_argument("crop: new count must be nonzero");
    if (new_count > wf.grid.count)
        throw std::invalid_argument("crop: new count exceeds grid");

    size_t i0 = zero_index(wf.grid);
    size_t keep_below = new_count / 2;
    if (i0 < keep_below || i0 - keep_below + new_count > wf.grid.count)
        throw std::invalid_argument("crop: window does not fit the grid");
    size_t lo = i0 - keep_below;

    SampledWavefunction out;
    out.domain = wf.domain;
    out.grid   = Grid{wf.grid.at(lo), wf.grid.step, new_count};
    out.amplitudes.assign(wf.amplitudes.begin() + long(lo),
                          wf.amplitudes.begin() + long(lo + new_count));
    return out;
}

} // namespace sampling
} // namespace combhom
