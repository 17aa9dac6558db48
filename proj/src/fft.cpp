#include "wkelab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "wkelab/errors.hpp"

namespace wkl {

namespace {
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

FftPlan::FftPlan(int d, int N) : d_(d), n_(N), size_(1) {
    std::vector<int> dims(d, N);
    for (int j = 0; j < d; ++j) size_ *= static_cast<std::size_t>(N);
    auto* buf = fftw_alloc_complex(size_);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd_ = fftw_plan_dft(d, dims.data(), buf, buf, FFTW_FORWARD, flags);
    bwd_ = fftw_plan_dft(d, dims.data(), buf, buf, FFTW_BACKWARD, flags);
    fftw_free(buf);
    if (!fwd_ || !bwd_) throw NumericalFailure("fftw: plan creation failed");
}

const FftPlan& FftPlan::get(int d, int N) {
    // Planning is not thread-safe in FFTW; execution with the new-array
    // interface is.
    std::lock_guard<std::mutex> lock(plan_mutex());
    static std::map<std::pair<int, int>, std::unique_ptr<FftPlan>> cache;
    auto& slot = cache[{d, N}];
    if (!slot) slot.reset(new FftPlan(d, N));
    return *slot;
}

void FftPlan::backward(std::complex<double>* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(bwd_), p, p);
}

void FftPlan::forward(std::complex<double>* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(fwd_), p, p);
}

int dealiased_grid(int K) {
    int n = 4 * K + 2;
    while (true) {
        int m = n;
        for (int p : {2, 3, 5, 7})
            while (m % p == 0) m /= p;
        if (m == 1) return n;
        ++n;
    }
}

}  // namespace wkl
