#include <array>
#include <cmath>
#include <utility>
#include <numbers>

#include "wkelab/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define WKELAB_HAVE_X86 1
#include <immintrin.h>
#endif

namespace wkl::simd {

#if WKELAB_HAVE_X86

namespace {

#define WKL_AVX2 __attribute__((target("avx2,fma")))

// Taylor coefficients of sin and cos on [-pi/2, pi/2]; truncation error is
// below 1e-17 at the interval ends.
constexpr double fact(int n) { return n <= 1 ? 1.0 : n * fact(n - 1); }
constexpr double sin_c(int k) { return (k % 2 ? -1.0 : 1.0) / fact(2 * k + 1); }
constexpr double cos_c(int k) { return (k % 2 ? -1.0 : 1.0) / fact(2 * k); }

template <class F, std::size_t... I>
constexpr std::array<double, sizeof...(I)> table(F f, std::index_sequence<I...>) {
    return {f(static_cast<int>(I))...};
}
constexpr auto kSin = table(sin_c, std::make_index_sequence<12>{});
constexpr auto kCos = table(cos_c, std::make_index_sequence<13>{});

WKL_AVX2 inline __m256d sin_poly(__m256d y) {
    const __m256d y2 = _mm256_mul_pd(y, y);
    __m256d p = _mm256_set1_pd(kSin[11]);
    for (int k = 10; k >= 0; --k) p = _mm256_fmadd_pd(p, y2, _mm256_set1_pd(kSin[k]));
    return _mm256_mul_pd(p, y);
}

WKL_AVX2 inline __m256d cos_poly(__m256d y) {
    const __m256d y2 = _mm256_mul_pd(y, y);
    __m256d p = _mm256_set1_pd(kCos[12]);
    for (int k = 11; k >= 0; --k) p = _mm256_fmadd_pd(p, y2, _mm256_set1_pd(kCos[k]));
    return p;
}

WKL_AVX2 inline __m256d round_near(__m256d x) {
    return _mm256_round_pd(x, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
}

WKL_AVX2 double sinc2_dot_avx2(const double* a, const double* b, std::size_t n, double w0,
                               double dw) {
    const __m256d pi = _mm256_set1_pd(std::numbers::pi);
    const __m256d tiny = _mm256_set1_pd(1e-8);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    const __m256d lane = _mm256_set_pd(3, 2, 1, 0);
    const __m256d vw0 = _mm256_set1_pd(w0), vdw = _mm256_set1_pd(dw);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d idx = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(i)), lane);
        const __m256d w = _mm256_fmadd_pd(idx, vdw, vw0);
        const __m256d r = _mm256_sub_pd(w, round_near(w));
        const __m256d s = sin_poly(_mm256_mul_pd(pi, r));
        const __m256d px = _mm256_mul_pd(pi, w);
        __m256d g = _mm256_div_pd(_mm256_mul_pd(s, s), _mm256_mul_pd(px, px));
        const __m256d small = _mm256_cmp_pd(_mm256_and_pd(w, absmask), tiny, _CMP_LT_OQ);
        g = _mm256_blendv_pd(g, one, small);
        __m256d v = _mm256_loadu_pd(a + i);
        if (b) v = _mm256_mul_pd(v, _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(v, g, acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) {
        const double v = b ? a[i] * b[i] : a[i];
        sum += v * sinc2(w0 + static_cast<double>(i) * dw);
    }
    return sum;
}

WKL_AVX2 inline __m256d cmul(__m256d a, __m256d b) {
    const __m256d br = _mm256_movedup_pd(b);
    const __m256d bi = _mm256_permute_pd(b, 0xF);
    const __m256d asw = _mm256_permute_pd(a, 0x5);
    return _mm256_fmaddsub_pd(a, br, _mm256_mul_pd(asw, bi));
}

WKL_AVX2 void cubic_avx2(const cplx* x, const cplx* y, const cplx* z, cplx* out,
                         std::size_t n) {
    const __m256d conjmask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    auto px = reinterpret_cast<const double*>(x);
    auto py = reinterpret_cast<const double*>(y);
    auto pz = reinterpret_cast<const double*>(z);
    auto po = reinterpret_cast<double*>(out);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vx = _mm256_loadu_pd(px + 2 * i);
        const __m256d vy = _mm256_xor_pd(_mm256_loadu_pd(py + 2 * i), conjmask);
        const __m256d vz = _mm256_loadu_pd(pz + 2 * i);
        _mm256_storeu_pd(po + 2 * i, cmul(cmul(vx, vy), vz));
    }
    if (i < n) scalar_kernels().cubic(x + i, y + i, z + i, out + i, n - i);
}

WKL_AVX2 void twist_avx2(const cplx* in, const double* turns, double scale, cplx* out,
                         std::size_t n) {
    const __m256d vscale = _mm256_set1_pd(scale);
    const __m256d pi = _mm256_set1_pd(std::numbers::pi);
    auto pin = reinterpret_cast<const double*>(in);
    auto po = reinterpret_cast<double*>(out);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d f = _mm256_mul_pd(vscale, _mm256_loadu_pd(turns + i));
        const __m256d y = _mm256_mul_pd(pi, _mm256_sub_pd(f, round_near(f)));
        const __m256d s = sin_poly(y), c = cos_poly(y);
        // double-angle: e(r) = cos(2 pi r) + i sin(2 pi r)
        const __m256d s2 = _mm256_mul_pd(_mm256_add_pd(s, s), c);
        const __m256d c2 = _mm256_fmsub_pd(c, c, _mm256_mul_pd(s, s));
        const __m256d a01 = _mm256_loadu_pd(pin + 2 * i);
        const __m256d a23 = _mm256_loadu_pd(pin + 2 * i + 4);
        const __m256d cc01 = _mm256_permute4x64_pd(c2, 0x50), ss01 = _mm256_permute4x64_pd(s2, 0x50);
        const __m256d cc23 = _mm256_permute4x64_pd(c2, 0xFA), ss23 = _mm256_permute4x64_pd(s2, 0xFA);
        const __m256d r01 = _mm256_fmaddsub_pd(a01, cc01, _mm256_mul_pd(_mm256_permute_pd(a01, 0x5), ss01));
        const __m256d r23 = _mm256_fmaddsub_pd(a23, cc23, _mm256_mul_pd(_mm256_permute_pd(a23, 0x5), ss23));
        _mm256_storeu_pd(po + 2 * i, r01);
        _mm256_storeu_pd(po + 2 * i + 4, r23);
    }
    if (i < n) scalar_kernels().twist(in + i, turns + i, scale, out + i, n - i);
}

}  // namespace

const Kernels* avx2_kernels() {
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    static const Kernels k{"avx2", &sinc2_dot_avx2, &cubic_avx2, &twist_avx2};
    return ok ? &k : nullptr;
}

#else

const Kernels* avx2_kernels() { return nullptr; }

#endif

}  // namespace wkl::simd
