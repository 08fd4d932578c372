#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <memory>
#include <mutex>
#include <type_traits>

namespace pricescale::detail {

namespace {

// FFTW planning is not thread-safe; plan execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanDeleter {
    void operator()(fftw_plan p) const {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(p);
    }
};

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

std::vector<std::complex<double>> real_dft(std::span<const double> x) {
    const int n = static_cast<int>(x.size());
    std::unique_ptr<double, FftwFree> in(fftw_alloc_real(x.size()));
    std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(x.size() / 2 + 1));

    std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDeleter> plan;
    {
        std::lock_guard lock(planner_mutex());
        plan.reset(fftw_plan_dft_r2c_1d(n, in.get(), out.get(), FFTW_ESTIMATE));
    }
    std::memcpy(in.get(), x.data(), x.size() * sizeof(double));
    fftw_execute(plan.get());

    std::vector<std::complex<double>> result(x.size() / 2 + 1);
    for (std::size_t k = 0; k < result.size(); ++k) {
        result[k] = {out.get()[k][0], out.get()[k][1]};
    }
    return result;
}

std::vector<std::complex<double>> complex_dft(std::span<const std::complex<double>> x) {
    const int n = static_cast<int>(x.size());
    std::unique_ptr<fftw_complex, FftwFree> in(fftw_alloc_complex(x.size()));
    std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(x.size()));

    std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDeleter> plan;
    {
        std::lock_guard lock(planner_mutex());
        plan.reset(fftw_plan_dft_1d(n, in.get(), out.get(), FFTW_FORWARD, FFTW_ESTIMATE));
    }
    for (std::size_t k = 0; k < x.size(); ++k) {
        in.get()[k][0] = x[k].real();
        in.get()[k][1] = x[k].imag();
    }
    fftw_execute(plan.get());

    std::vector<std::complex<double>> result(x.size());
    for (std::size_t k = 0; k < result.size(); ++k) {
        result[k] = {out.get()[k][0], out.get()[k][1]};
    }
    return result;
}

}  // namespace pricescale::detail
