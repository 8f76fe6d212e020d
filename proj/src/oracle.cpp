#include "combhom/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "combhom/errors.hpp"
#include "parallel.hpp"

namespace combhom {
namespace oracle {

namespace {

// Largest tolerated fraction of the state a delay may push out of the
// window before the quadrature stops being an honest coincidence.
constexpr double mass_loss_limit = 1e-3;

double trap_weight(size_t i, size_t n) {
    return (i == 0 || i + 1 == n) ? 0.5 : 1.0;
}

void require_square_time_table(const TwoPhotonTable& psi) {
    sampling::validate(psi.grid1);
    sampling::validate(psi.grid2);
    if (psi.domain != sampling::Domain::time)
        throw std::invalid_argument("oracle tables must be sampled in time");
    if (psi.amplitudes.size() != psi.grid1.count * psi.grid2.count)
        throw std::invalid_argument("table size does not match its grids");
    if (psi.grid1.count != psi.grid2.count ||
        psi.grid1.start != psi.grid2.start || psi.grid1.step != psi.grid2.step)
        throw std::invalid_argument(
            "oracle requires identical axes for the two detection times");
}

// Delay expressed in grid cells. Values beyond the window are clamped to a
// shift that empties the table, which keeps the cast in range.
double delay_in_cells(double delta_t, double step, size_t count) {
    const double cells = delta_t / step;
    const double limit = 2.0 * double(count);
    return std::clamp(cells, -limit, limit);
}

long snap_to_grid(double cells) {
    const double rounded = std::round(cells);
    if (std::abs(cells - rounded) > 1e-9 * std::max(1.0, std::abs(cells)))
        throw std::invalid_argument(
            "delta_t must be an integer number of grid steps; use "
            "coincidence_oracle_resampled for off-grid delays");
    return static_cast<long>(rounded);
}

// Catmull-Rom interpolation of a strided sequence at real index x, with
// zeros outside [0, n).
std::complex<double> cubic_sample(const std::complex<double>* base,
                                  size_t stride, size_t n, double x) {
    if (!(x > -2.0) || x > double(n) + 1.0) return {};
    const double fl = std::floor(x);
    const long i1 = static_cast<long>(fl);
    const double u = x - fl;
    auto at = [&](long i) -> std::complex<double> {
        if (i < 0 || i >= static_cast<long>(n)) return {};
        return base[size_t(i) * stride];
    };
    const auto p0 = at(i1 - 1);
    const auto p1 = at(i1);
    const auto p2 = at(i1 + 1);
    const auto p3 = at(i1 + 2);
    const auto c1 = 0.5 * (p2 - p0);
    const auto c2 = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
    const auto c3 = 0.5 * (p3 - p0) + 1.5 * (p1 - p2);
    return p1 + u * (c1 + u * (c2 + u * c3));
}

std::vector<std::complex<double>> modulation_phases(const sampling::Grid& g,
                                                    double delta_omega) {
    std::vector<std::complex<double>> phases(g.count);
    for (size_t i = 0; i < g.count; ++i)
        phases[i] = std::polar(1.0, -delta_omega * g.at(i));
    return phases;
}

// The table with one photon delayed (by whole cells or by interpolation)
// and modulated. Written by index, so deterministic for any split.
std::vector<std::complex<double>> build_shifted(const TwoPhotonTable& psi,
                                                double cells, bool snap,
                                                double delta_omega,
                                                DelayAssignment assignment,
                                                size_t threads) {
    const size_t n = psi.grid1.count;
    const auto phases = modulation_phases(psi.grid1, delta_omega);
    std::vector<std::complex<double>> out(n * n);
    const bool on_second = assignment == DelayAssignment::second_argument;
    if (snap) {
        const long k = snap_to_grid(cells);
        par::parallel_for(n, threads, [&](size_t i) {
            for (size_t j = 0; j < n; ++j) {
                const long src = static_cast<long>(on_second ? j : i) - k;
                std::complex<double> v{};
                if (src >= 0 && src < static_cast<long>(n))
                    v = on_second ? psi.at(i, size_t(src))
                                  : psi.at(size_t(src), j);
                out[i * n + j] = v * phases[on_second ? j : i];
            }
        });
    } else {
        par::parallel_for(n, threads, [&](size_t i) {
            for (size_t j = 0; j < n; ++j) {
                const std::complex<double>* base =
                    on_second ? &psi.amplitudes[i * n] : &psi.amplitudes[j];
                const size_t stride = on_second ? 1 : n;
                const double x = double(on_second ? j : i) - cells;
                out[i * n + j] =
                    cubic_sample(base, stride, n, x) * phases[on_second ? j : i];
            }
        });
    }
    return out;
}

double weighted_norm2(const std::vector<std::complex<double>>& amp, size_t n) {
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (size_t j = 0; j < n; ++j)
            acc += trap_weight(j, n) * std::norm(amp[i * n + j]);
        total += trap_weight(i, n) * acc;
    }
    return total;
}

double antisym_quadrature(const TwoPhotonTable& psi,
                          const std::vector<std::complex<double>>& shifted,
                          OracleInfo* info, size_t threads) {
    const size_t n = psi.grid1.count;
    std::vector<double> rows(n);
    par::parallel_for(n, threads, [&](size_t i) {
        double acc = 0.0;
        for (size_t j = 0; j < n; ++j)
            acc += trap_weight(j, n) * std::norm(shifted[i * n + j] -
                                                 shifted[j * n + i]);
        rows[i] = trap_weight(i, n) * acc;
    });
    const double before = weighted_norm2(psi.amplitudes, n);
    const double after = weighted_norm2(shifted, n);
    const double shifted_out =
        before > 0.0 ? std::max(0.0, 1.0 - after / before) : 0.0;
    if (info) info->shifted_out = shifted_out;
    if (shifted_out > mass_loss_limit) {
        std::ostringstream msg;
        msg << "delay pushed a fraction " << shifted_out
            << " of the state outside the sampled window";
        throw ConsistencyError(msg.str());
    }
    const double total = par::pairwise_sum(std::span<const double>(rows));
    return 0.25 * psi.grid1.step * psi.grid2.step * total;
}

} // namespace

TwoPhotonTable product_table(const sampling::SampledWavefunction& a,
                             const sampling::SampledWavefunction& b,
                             size_t size_cap) {
    sampling::validate(a.grid);
    sampling::validate(b.grid);
    if (a.domain != sampling::Domain::time ||
        b.domain != sampling::Domain::time)
        throw std::invalid_argument("product_table expects time-domain states");
    if (a.amplitudes.size() != a.grid.count ||
        b.amplitudes.size() != b.grid.count)
        throw std::invalid_argument("state size does not match its grid");
    if (a.grid.count > size_cap || b.grid.count > size_cap)
        throw std::invalid_argument(
            "state grids exceed the oracle size cap; crop the inputs first");

    TwoPhotonTable out;
    out.domain = sampling::Domain::time;
    out.grid1 = a.grid;
    out.grid2 = b.grid;
    out.amplitudes.resize(a.grid.count * b.grid.count);
    for (size_t i = 0; i < a.grid.count; ++i)
        for (size_t j = 0; j < b.grid.count; ++j)
            out.at(i, j) = a.amplitudes[i] * b.amplitudes[j];
    return out;
}

double coincidence_oracle(const TwoPhotonTable& psi, const hom::Shift& shift,
                          OracleInfo* info, DelayAssignment assignment,
                          size_t threads) {
    require_square_time_table(psi);
    const size_t nthreads = par::thread_count(threads);
    const double cells =
        delay_in_cells(shift.delta_t, psi.grid1.step, psi.grid1.count);
    const auto shifted = build_shifted(psi, cells, true, shift.delta_omega,
                                       assignment, nthreads);
    return antisym_quadrature(psi, shifted, info, nthreads);
}

double coincidence_oracle_resampled(const TwoPhotonTable& psi, double delta_t,
                                    OracleInfo* info,
                                    DelayAssignment assignment,
                                    size_t threads) {
    require_square_time_table(psi);
    const size_t nthreads = par::thread_count(threads);
    const double cells =
        delay_in_cells(delta_t, psi.grid1.step, psi.grid1.count);
    const auto shifted =
        build_shifted(psi, cells, false, 0.0, assignment, nthreads);
    return antisym_quadrature(psi, shifted, info, nthreads);
}

} // namespace oracle
} // namespace combhom
