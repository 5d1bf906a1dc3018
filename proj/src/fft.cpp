#include "arise/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace arise {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::vector<Complex> run_plan(const std::vector<Complex>& x, int sign) {
    const std::size_t n = x.size();
    if (n == 0) throw std::invalid_argument("dft: empty input");
    std::vector<Complex> out(n);
    auto* in_ptr = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(x.data()));
    auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        // FFTW_ESTIMATE leaves the input untouched and plans deterministically.
        plan = fftw_plan_dft_1d(static_cast<int>(n), in_ptr, out_ptr, sign,
                                FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    }
    if (plan == nullptr) throw std::runtime_error("dft: planner failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

} // namespace

std::vector<Complex> dft_forward(const std::vector<Complex>& x) {
    // FFTW_BACKWARD is the positive-exponent transform.
    return run_plan(x, FFTW_BACKWARD);
}

std::vector<Complex> dft_inverse(const std::vector<Complex>& x) {
    std::vector<Complex> out = run_plan(x, FFTW_FORWARD);
    const double scale = 1.0 / static_cast<double>(x.size());
    for (auto& v : out) v *= scale;
    return out;
}

} // namespace arise
