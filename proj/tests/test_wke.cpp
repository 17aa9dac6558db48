#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "wkelab/errors.hpp"
#include "wkelab/simd.hpp"
#include "wkelab/wke.hpp"

using namespace wkl;

namespace {
Profile custom_gaussian(double amp, double w) {
    Profile p;
    p.kind = Profile::Kind::Custom;
    p.custom = [=](const double* x, int d) {
        double s = 0;
        for (int j = 0; j < d; ++j) s += x[j] * x[j];
        return amp * std::exp(-s / (w * w));
    };
    p.K_max = 4.5;
    return p;
}
}  // namespace

TEST_CASE("S_t matches the plain double loop") {
    const auto t = TorusSpec::make(2, 4.0, {1.0, 1.3});
    const auto phi = Profile::gaussian(1.0, 0.8);
    for (const char* k : {"scalar", "auto"}) {
        simd::select(k);
        for (double tt : {0.7, 4.0, 30.0})
            for (const Mode& m : {make_mode({0, 0}), make_mode({3, -1}), make_mode({9, 0})}) {
                const double fast = riemann_S_t(phi, tt, t, 2.0, m);
                const double ref = oracle::S_t(phi, tt, t, 2.0, m);
                CHECK(fast == doctest::Approx(ref).epsilon(1e-12).scale(1e-12));
            }
    }
    simd::select("auto");
}

TEST_CASE("S_t vanishes for constant profiles and rejects zeros") {
    const auto t = TorusSpec::make(2, 4.0);
    CHECK(riemann_S_t(Profile::constant(2.0), 3.0, t, 1.0, make_mode({1, 0})) == 0.0);
    CHECK_THROWS_AS(riemann_S_t(Profile::constant(0.0), 3.0, t, 1.0, Mode{}), ValidationError);
}

TEST_CASE("S_t decays like 1/t at large t") {
    const auto t = TorusSpec::make(2, 6.0);
    const auto phi = Profile::gaussian(1.0, 0.8);
    const double a = riemann_S_t(phi, 6.0, t, 2.0, make_mode({2, 0}));
    const double b = riemann_S_t(phi, 12.0, t, 2.0, make_mode({2, 0}));
    CHECK(std::abs(b) < std::abs(a));
}

TEST_CASE("sinc^2 integrates to one") {
    CHECK(std::abs(sinc2_integral() - 1.0) < 1e-4);
    CHECK(std::abs(measured_sinc2_constant() - 1.0) < 1e-4);
    CHECK(std::abs(sinc2_integral(50, 32) - sinc2_integral(400, 32)) < 1e-5);
}

TEST_CASE("collision: Gaussian closed form against the generic quadrature") {
    const auto t = TorusSpec::make(2, 1.0, {1.0, 1.4});
    const auto g = Profile::gaussian(1.3, 1.0);
    const auto c = custom_gaussian(1.3, 1.0);
    Quadrature q;
    q.n_rho = 40;
    q.n_theta = 48;
    q.n_perp = 40;
    q.n_omega = 24;
    for (const Kernel K : {Kernel::gaussian(0.4), Kernel::sinc2(1.5), Kernel::delta()}) {
        for (double x0 : {0.0, 0.6}) {
            const double xi[2] = {x0, -0.3};
            const double a = collision_K(g, K, t, xi);
            const double b = collision_K(c, K, t, xi, q);
            CHECK(a == doctest::Approx(b).epsilon(2e-3).scale(1e-6));
        }
    }
}

TEST_CASE("collision: d = 3 closed form is cubic-homogeneous") {
    const auto t = TorusSpec::make(3, 1.0);
    const double xi[3] = {0.3, 0.1, -0.2};
    const double a = collision_K(Profile::gaussian(1.0, 1.0), Kernel::sinc2(3.0), t, xi);
    const double b = collision_K(Profile::gaussian(2.0, 1.0), Kernel::sinc2(3.0), t, xi);
    CHECK(b == doctest::Approx(8 * a).epsilon(1e-12));
    CHECK(std::isfinite(collision_K(Profile::gaussian(), Kernel::delta(), t, xi)));
}

TEST_CASE("collision: generic quadrature self-convergence") {
    const auto t = TorusSpec::make(2, 1.0);
    const auto c = custom_gaussian(1.0, 1.0);
    const double xi[2] = {0.4, 0.2};
    Quadrature q1;
    Quadrature q2{2 * q1.n_rho, 2 * q1.n_theta, 2 * q1.n_perp, 2 * q1.n_omega, 0};
    const double a = collision_K(c, Kernel::gaussian(0.3), t, xi, q1);
    const double b = collision_K(c, Kernel::gaussian(0.3), t, xi, q2);
    CHECK(std::abs(a - b) < 1e-3 * std::abs(b));
}

TEST_CASE("collision: Rayleigh-Jeans and constant nulls") {
    const auto t = TorusSpec::make(2, 1.0, {1.0, 1.5});
    auto rj = Profile::rayleigh_jeans(1.0, 1.0);
    rj.K_max = 3.0;
    const double xi[2] = {0.5, 0.2};
    const double k1 = collision_K(rj, Kernel::gaussian(0.2), t, xi);
    const double k2 = collision_K(rj, Kernel::gaussian(0.1), t, xi);
    const double k3 = collision_K(rj, Kernel::gaussian(0.05), t, xi);
    CHECK(std::abs(k2) < std::abs(k1));
    CHECK(std::abs(k3) < std::abs(k2));
    CHECK(std::abs(k2) / std::abs(k1) == doctest::Approx(0.25).epsilon(0.15));
    CHECK(collision_K(Profile::constant(1.0), Kernel::delta(), t, xi) == 0.0);
}

TEST_CASE("collision: mass and energy nulls") {
    const auto t = TorusSpec::make(2, 1.0);
    const auto m = collision_moments(Profile::gaussian(1.0, 1.0), Kernel::delta(), t, 24, 3.5);
    CHECK(m.abs > 0);
    CHECK(std::abs(m.mass) < 0.01 * m.abs);
    CHECK(std::abs(m.energy) < 0.01 * m.abs);
}

TEST_CASE("kinetic prediction trivial cases") {
    const auto t = TorusSpec::make(2, 6.0);
    const auto p = PhysParams::from_alpha(0.05, 6.0, t);
    const std::vector<Mode> ks{Mode{}, make_mode({1, 2})};
    const auto z = kinetic_prediction(Profile::gaussian(), 0.0, p, t, 1.5, ks);
    for (std::size_t i = 0; i < ks.size(); ++i) {
        CHECK(z.lattice[i] == z.n_in[i]);
        CHECK(z.delta[i] == z.n_in[i]);
    }
    const auto c = kinetic_prediction(Profile::constant(0.7), 3.0, p, t, 1.5, ks);
    for (std::size_t i = 0; i < ks.size(); ++i) {
        CHECK(c.lattice[i] == doctest::Approx(0.7));
        CHECK(c.finite_t[i] == doctest::Approx(0.7));
    }
}

TEST_CASE("first iterate moments") {
    const auto t = TorusSpec::make(2, 3.0);
    const auto p = PhysParams::from_alpha(0.2, 2.0, t);
    const auto z = first_iterate_moments(Profile::constant(0.0), NoiseLaw::Gaussian, 1.0, p, t, 1.0, Mode{});
    CHECK(z.EJ1sq == 0.0);
    CHECK(z.EJ0J1 == cplx(0));
    const auto prof = Profile::gaussian(1.0, 0.7);
    const auto rep = second_chaos_identity(prof, NoiseLaw::Gaussian, p, t, 1.0,
                                           {Mode{}, make_mode({1, 1})}, 2000, 17, 0.1);
    for (const auto& pr : rep.probes) {
        CHECK(std::abs(pr.z_J1sq) < 4);
        CHECK(std::abs(pr.z_re) < 4);
        CHECK(std::abs(pr.z_im) < 4);
    }
    const auto repc = second_chaos_identity(prof, NoiseLaw::Circle, p, t, 1.0, {make_mode({1, 0})},
                                            2000, 18, 0.1);
    CHECK(std::abs(repc.probes[0].z_J1sq) < 4);
    CHECK(std::abs(repc.probes[0].z_im) < 4);
}
