#include "fft_engine.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace combhom {
namespace fft {

namespace {

// FFTW planning mutates global state; execution via fftw_execute_dft on
// fresh buffers does not. One mutex guards the plan cache and all planner
// calls. FFTW_ESTIMATE keeps planning deterministic and cheap,
// FFTW_UNALIGNED lets plans run on plain vector storage.
std::mutex plan_mutex;
std::map<std::pair<size_t, int>, fftw_plan>& plan_cache() {
    static std::map<std::pair<size_t, int>, fftw_plan> cache;
    return cache;
}

fftw_plan plan_for(size_t n, int sign) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto& cache = plan_cache();
    auto  it    = cache.find({n, sign});
    if (it != cache.end()) return it->second;

    std::vector<std::complex<double>> scratch_in(n), scratch_out(n);
    fftw_plan plan = fftw_plan_dft_1d(
        int(n), reinterpret_cast<fftw_complex*>(scratch_in.data()),
        reinterpret_cast<fftw_complex*>(scratch_out.data()),
        sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
        FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT);
    if (!plan) throw std::runtime_error("fft: planner failed");
    cache.emplace(std::pair<size_t, int>{n, sign}, plan);
    return plan;
}

} // namespace

void transform(std::span<const std::complex<double>> in,
               std::span<std::complex<double>> out, int sign) {
    if (in.size() != out.size())
        throw std::invalid_argument("fft: input and output sizes differ");
    if (in.empty()) throw std::invalid_argument("fft: empty input");
    if (in.data() == out.data())
        throw std::invalid_argument("fft: in-place transform not supported");
    if (sign != -1 && sign != 1)
        throw std::invalid_argument("fft: sign must be -1 or +1");

    fftw_plan plan = plan_for(in.size(), sign);
    fftw_execute_dft(
        plan,
        reinterpret_cast<fftw_complex*>(
            const_cast<std::complex<double>*>(in.data())),
        reinterpret_cast<fftw_complex*>(out.data()));
}

} // namespace fft
} // namespace combhom
