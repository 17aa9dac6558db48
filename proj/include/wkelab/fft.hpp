#pragma once

#include <complex>
#include <cstddef>

namespace wkl {

/// In-place d-dimensional complex FFT on an N^d grid (row-major).  Plans are
/// built once per (d, N) with FFTW_ESTIMATE so results do not depend on
/// timing-based planner choices.
class FftPlan {
public:
    static const FftPlan& get(int d, int N);

    /// u(x) = sum_m c_m e^{+2 pi i m.x/N}, unnormalized.
    void backward(std::complex<double>* data) const;
    /// c_m = sum_x u(x) e^{-2 pi i m.x/N}, unnormalized.
    void forward(std::complex<double>* data) const;

    int dim() const { return d_; }
    int n() const { return n_; }
    std::size_t size() const { return size_; }

private:
    FftPlan(int d, int N);
    int d_, n_;
    std::size_t size_;
    void* fwd_ = nullptr;
    void* bwd_ = nullptr;
};

/// Smallest 7-smooth N >= 4K + 2: enough zero padding that the cubic product
/// of fields supported in [-K, K]^d does not alias back into [-K, K]^d.
int dealiased_grid(int K);

}  // namespace wkl
