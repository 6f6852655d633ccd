#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace oamsim::detail {

namespace {
// FFTW's planner is not re-entrant; execution on distinct arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

void fft2(std::vector<std::complex<double>>& data, int n, FftDirection dir) {
    if (data.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
        throw std::invalid_argument("fft2: buffer size does not match n*n");
    }
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    const int sign = dir == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_2d(n, n, buf, buf, sign, FFTW_ESTIMATE);
    }
    if (plan == nullptr) throw std::runtime_error("fft2: FFTW planning failed");
    fftw_execute(plan);
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
}

} // namespace oamsim::detail
