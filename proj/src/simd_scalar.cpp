#include <cmath>
#include <numbers>

#include "wkelab/simd.hpp"

namespace wkl::simd {

double sinc2(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-8) return 1.0;
    // sin^2(pi x) is 1-periodic; reducing first keeps large arguments accurate.
    const double r = x - std::nearbyint(x);
    const double s = std::sin(std::numbers::pi * r);
    const double px = std::numbers::pi * x;
    return (s * s) / (px * px);
}

namespace {

double sinc2_dot_scalar(const double* a, const double* b, std::size_t n, double w0, double dw) {
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = w0 + static_cast<double>(i) * dw;
        const double v = b ? a[i] * b[i] : a[i];
        acc += v * sinc2(w);
    }
    return acc;
}

void cubic_scalar(const cplx* x, const cplx* y, const cplx* z, cplx* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = -y[i].imag();
        const double zr = z[i].real(), zi = z[i].imag();
        const double pr = xr * yr - xi * yi, pi = xr * yi + xi * yr;
        out[i] = cplx(pr * zr - pi * zi, pr * zi + pi * zr);
    }
}

void twist_scalar(const cplx* in, const double* turns, double scale, cplx* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double f = scale * turns[i];
        const double r = f - std::nearbyint(f);
        const double ang = 2.0 * std::numbers::pi * r;
        const double c = std::cos(ang), s = std::sin(ang);
        const double ar = in[i].real(), ai = in[i].imag();
        out[i] = cplx(ar * c - ai * s, ar * s + ai * c);
    }
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels k{"scalar", &sinc2_dot_scalar, &cubic_scalar, &twist_scalar};
    return k;
}

}  // namespace wkl::simd
