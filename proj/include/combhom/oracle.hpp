// oracle.hpp: brute-force two-photon coincidences from full 2D tables.
#pragma once

#include "combhom/hom.hpp"
#include "combhom/sampling.hpp"

namespace combhom {
namespace oracle {

// A two-photon amplitude psi(t1, t2); reuses the 2D sampling container.
using TwoPhotonTable = sampling::SampledWavefunction2D;

// Per-axis sample cap for oracle tables (a full table is count^2 cells).
inline constexpr size_t default_size_cap = 2048;

// Separable table psi(t1, t2) = a(t1) * b(t2) for independent photons.
TwoPhotonTable product_table(const sampling::SampledWavefunction& a,
                             const sampling::SampledWavefunction& b,
                             size_t size_cap = default_size_cap);

// Which photon the delay and modulation act on. second_argument shifts the
// t2 photon and matches the fast paths, which delay the second state.
enum class DelayAssignment { first_argument, second_argument };

struct OracleInfo {
    // Probability mass the delay pushed outside the sampled window.
    double shifted_out{0.0};
};

// Coincidence probability straight from beamsplitter antisymmetrization,
//   C = 1/4 IntInt |psi_s(t1, t2) - psi_s(t2, t1)|^2 dt1 dt2,
// where psi_s is the table with one photon delayed and modulated. Shares
// no code with the fast paths: the delay is an index shift (delta_t must
// be an integer multiple of the grid step), the modulation a column phase,
// and the quadrature a full 2D trapezoid sum. Requires a square table on
// identical axes, and refuses with ConsistencyError when the delay moves
// more than a sliver of the state out of the window, since the integral
// would undercount coincidences. Deterministic for any thread count.
double coincidence_oracle(const TwoPhotonTable& psi, const hom::Shift& shift,
                          OracleInfo* info = nullptr,
                          DelayAssignment assignment =
                              DelayAssignment::second_argument,
                          size_t threads = 0);

// Same quadrature with the delayed photon resampled by a Catmull-Rom
// cubic, so delta_t may fall between grid points. Interpolation caps the
// accuracy near 1e-4 of the dip scale; modulation is not supported here.
double coincidence_oracle_resampled(const TwoPhotonTable& psi,
                                    double delta_t,
                                    OracleInfo* info = nullptr,
                                    DelayAssignment assignment =
                                        DelayAssignment::second_argument,
                                    size_t threads = 0);

} // namespace oracle
} // namespace combhom
