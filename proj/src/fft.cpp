#include "fft.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <new>

namespace nlchns::detail {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

FftPlan::FftPlan(int n) : n_(n) {
    const std::size_t real_count = static_cast<std::size_t>(n) * n;
    const std::size_t complex_count = static_cast<std::size_t>(n) * (n / 2 + 1);
    std::lock_guard<std::mutex> lock(planner_mutex());
    real_ = fftw_alloc_real(real_count);
    complex_ = fftw_alloc_complex(complex_count);
    if (real_ == nullptr || complex_ == nullptr) {
        fftw_free(real_);
        fftw_free(complex_);
        throw std::bad_alloc();
    }
    forward_ = fftw_plan_dft_r2c_2d(n, n, real_, complex_, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_2d(n, n, complex_, real_, FFTW_ESTIMATE);
}

FftPlan::~FftPlan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(real_);
    fftw_free(complex_);
}

FftPlan& plan_for(int n) {
    thread_local std::map<int, std::unique_ptr<FftPlan>> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, std::make_unique<FftPlan>(n)).first;
    }
    return *it->second;
}

}  // namespace nlchns::detail
