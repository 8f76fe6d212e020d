// fft_engine.hpp: thread-safe in-order complex DFT used by the sampling layer.
#pragma once

#include <complex>
#include <span>

namespace combhom {
namespace fft {

// out[j] = sum_k in[k] exp(sign * 2 pi i j k / N), sign in {-1, +1}.
// Unnormalized, out of place; in and out must not alias and must both have
// the same nonzero length. Plans are cached per (length, sign) and executed
// on caller buffers, so concurrent calls from different threads are safe
// and bit-identical regardless of thread count.
void transform(std::span<const std::complex<double>> in,
               std::span<std::complex<double>> out, int sign);

} // namespace fft
} // namespace combhom
