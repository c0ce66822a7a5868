#include "metroflow/vmd/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace metroflow::fft {

namespace {

// FFTW's planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

std::vector<Complex> forward_half(std::span<const double> signal) {
    const auto n = static_cast<int>(signal.size());
    std::vector<double> in(signal.begin(), signal.end());
    std::vector<Complex> out(signal.size() / 2 + 1);
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

std::vector<double> inverse_half(std::span<const Complex> half, std::size_t n) {
    std::vector<Complex> in(half.begin(), half.end());
    in.resize(n / 2 + 1);
    // c2r ignores the imaginary part of these bins; zero them for clarity.
    in[0].imag(0.0);
    if (n % 2 == 0) in[n / 2].imag(0.0);
    std::vector<double> out(n);
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()), out.data(),
                                    FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    const double scale = 1.0 / static_cast<double>(n);
    std::transform(out.begin(), out.end(), out.begin(), [scale](double v) { return v * scale; });
    return out;
}

} // namespace metroflow::fft
