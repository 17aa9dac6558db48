#include <random>

#include "doctest.h"
#include "wkelab/simd.hpp"

using namespace wkl::simd;

TEST_CASE("sinc2 values") {
    CHECK(sinc2(0.0) == 1.0);
    CHECK(sinc2(1.0) == doctest::Approx(0.0).scale(1));
    CHECK(sinc2(3.0) == doctest::Approx(0.0).scale(1));
    CHECK(sinc2(0.5) == doctest::Approx(4.0 / (M_PI * M_PI)));
    for (double x : {0.1, 0.7, 2.3, 17.9, 1e5 + 0.25}) {
        CHECK(sinc2(x) == sinc2(-x));
        CHECK(sinc2(x) >= 0.0);
    }
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
    const Kernels* v = avx2_kernels();
    if (!v) {
        MESSAGE("no AVX2 on this machine; equivalence not exercised");
        return;
    }
    const Kernels& s = scalar_kernels();
    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> u(-1, 1);
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 1001u}) {
        std::vector<double> a(n), b(n);
        for (auto& x : a) x = u(g);
        for (auto& x : b) x = u(g);
        for (double w0 : {0.0, -3.7, 250.3}) {
            for (double dw : {0.0, 0.013, -1.9}) {
                const double rs = s.sinc2_dot(a.data(), b.data(), n, w0, dw);
                const double rv = v->sinc2_dot(a.data(), b.data(), n, w0, dw);
                CHECK(rv == doctest::Approx(rs).epsilon(1e-12).scale(1e-14));
                const double rs1 = s.sinc2_dot(a.data(), nullptr, n, w0, dw);
                const double rv1 = v->sinc2_dot(a.data(), nullptr, n, w0, dw);
                CHECK(rv1 == doctest::Approx(rs1).epsilon(1e-12).scale(1e-14));
            }
        }
        std::vector<cplx> x(n), y(n), z(n), o1(n), o2(n);
        std::vector<double> turns(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = {u(g), u(g)};
            y[i] = {u(g), u(g)};
            z[i] = {u(g), u(g)};
            turns[i] = 1000 * u(g);
        }
        s.cubic(x.data(), y.data(), z.data(), o1.data(), n);
        v->cubic(x.data(), y.data(), z.data(), o2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(o1[i] - o2[i]) < 1e-15);
        s.twist(x.data(), turns.data(), 0.37, o1.data(), n);
        v->twist(x.data(), turns.data(), 0.37, o2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(o1[i] - o2[i]) < 1e-14);
        // aliasing
        o2 = x;
        v->twist(o2.data(), turns.data(), 0.37, o2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(o1[i] - o2[i]) < 1e-14);
    }
}

TEST_CASE("kernel selection") {
    select("scalar");
    CHECK(std::string(active().name) == "scalar");
    select("auto");
    CHECK_THROWS(select("sse9"));
}
