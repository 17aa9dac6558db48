#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace wkl::simd {

using cplx = std::complex<double>;

/// Dense inner loops with one scalar reference and optional vector variants.
/// The variants agree with the reference to rounding (summation order and
/// polynomial sin/cos differ), never bit-for-bit.
struct Kernels {
    const char* name;

    /// sum_i a_i * b_i * g(w0 + i*dw), g(x) = (sin(pi x)/(pi x))^2.  b may be
    /// null, meaning b_i = 1.
    double (*sinc2_dot)(const double* a, const double* b, std::size_t n, double w0, double dw);

    /// out_i = x_i * conj(y_i) * z_i.  out may alias any input.
    void (*cubic)(const cplx* x, const cplx* y, const cplx* z, cplx* out, std::size_t n);

    /// out_i = in_i * exp(2 pi i * scale * turns_i).  out may alias in.
    void (*twist)(const cplx* in, const double* turns, double scale, cplx* out, std::size_t n);
};

const Kernels& scalar_kernels();
/// Null when the binary or the CPU lacks AVX2+FMA.
const Kernels* avx2_kernels();

/// Selected once: AVX2 when available unless WKELAB_SIMD=scalar.
const Kernels& active();
void select(const std::string& name);  // "scalar" | "avx2" | "auto"

/// Scalar g(x) used everywhere outside the dense loops.
double sinc2(double x);

}  // namespace wkl::simd
