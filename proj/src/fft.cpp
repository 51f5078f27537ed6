#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace pdc::detail {

namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

} // namespace

std::vector<double> real_fft_magnitude(std::span<const double> input, std::size_t n) {
    if (n < input.size() || n == 0) {
        throw std::invalid_argument("real_fft_magnitude: transform length shorter than input");
    }
    const std::size_t n_out = n / 2 + 1;
    std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
    std::unique_ptr<fftw_complex, FftwFree> out(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n_out)));
    if (!in || !out) throw std::bad_alloc();

    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
    }
    std::fill(in.get(), in.get() + n, 0.0);
    std::copy(input.begin(), input.end(), in.get());
    fftw_execute(plan);

    std::vector<double> mag(n_out);
    for (std::size_t k = 0; k < n_out; ++k) mag[k] = std::hypot(out.get()[k][0], out.get()[k][1]);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return mag;
}

} // namespace pdc::detail
