#pragma once

#include <complex>

#include <fftw3.h>

namespace nlchns::detail {

/// Real-to-complex 2-D FFTW plan pair for an n x n grid with its own aligned buffers.
/// Plans are created with FFTW_ESTIMATE so the chosen algorithm, and therefore the
/// round-off, is the same on every run.
class FftPlan {
public:
    explicit FftPlan(int n);
    ~FftPlan();
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    int n() const { return n_; }
    double* real_buffer() { return real_; }
    std::complex<double>* complex_buffer() { return reinterpret_cast<std::complex<double>*>(complex_); }

    void forward() { fftw_execute(forward_); }
    /// Destroys the contents of the complex buffer.
    void backward() { fftw_execute(backward_); }

private:
    int n_;
    double* real_;
    fftw_complex* complex_;
    fftw_plan forward_;
    fftw_plan backward_;
};

/// Per-thread plan cache; planning itself is serialized behind a global lock.
FftPlan& plan_for(int n);

}  // namespace nlchns::detail
