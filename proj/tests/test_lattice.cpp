#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "wkelab/errors.hpp"
#include "wkelab/lattice.hpp"
#include "wkelab/params.hpp"

using namespace wkl;

namespace {
Mode rnd(std::mt19937_64& g, int d, int r) {
    std::uniform_int_distribution<int> u(-r, r);
    Mode m;
    for (int j = 0; j < d; ++j) m.idx[j] = u(g);
    return m;
}
}  // namespace

TEST_CASE("beta norms") {
    CHECK(beta_norm_sq(make_mode({0, 0}), TorusSpec::make(2, 3.0, {1.3, 1.7})) == 0.0);
    CHECK(beta_norm_sq(make_mode({3, 4}), TorusSpec::make(2, 1.0)) == doctest::Approx(25.0));
    CHECK(beta_norm_sq(make_mode({3, 4}), TorusSpec::make(2, 2.0, {1, 2})) ==
          doctest::Approx(10.25));
}

TEST_CASE("torus validation") {
    CHECK_THROWS_AS(TorusSpec::make(1, 4.0), ValidationError);
    CHECK_THROWS_AS(TorusSpec::make(2, -1.0), ValidationError);
    CHECK_THROWS_AS(TorusSpec::make(2, 4.0, {1.0, 2.5}), ValidationError);
    CHECK_THROWS_AS(TorusSpec::make(2, 4.0, {0.9, 1.0}), ValidationError);
}

TEST_CASE("omega identities on random quadruples") {
    std::mt19937_64 g(3);
    const auto t = TorusSpec::make(3, 5.0, {1.0, std::sqrt(2.0), 1.7});
    for (int it = 0; it < 500; ++it) {
        const Mode k = rnd(g, 3, 9), k1 = rnd(g, 3, 9), k3 = rnd(g, 3, 9);
        const Mode k2 = k1 + k3 - k;
        const double om = omega(k1, k2, k3, k, t);
        CHECK(om == doctest::Approx(-2 * q_form(k1 - k, k3 - k, t)).epsilon(1e-12).scale(1));
        CHECK(om + omega(k2, k1, k, k3, t) == doctest::Approx(0.0).epsilon(1e-10).scale(1));
    }
    const Mode k = make_mode({2, -1, 3});
    CHECK(omega(k, k, k, k, t) == 0.0);
    const Mode k3 = make_mode({4, 4, -2});
    CHECK(omega(k, k3, k3, k, t) == doctest::Approx(0.0).scale(1));
}

TEST_CASE("S3 matches the plain loop") {
    for (double beta2 : {1.0, std::sqrt(2.0)}) {
        const auto t = TorusSpec::make(2, 4.0, {1.0, beta2});
        ResonanceQuery q;
        q.T = 4;
        q.theta = 0;
        CHECK(count_S3(q, t) == oracle::S3(q, t));
        q.k = make_mode({1, 2});
        q.a = make_mode({-1, 0});
        q.m = 0.3;
        CHECK(count_S3(q, t) == oracle::S3(q, t));
        q.T = 40;
        CHECK(count_S3(q, t) == oracle::S3(q, t));
    }
}

TEST_CASE("S2 matches the plain loop") {
    const auto t = TorusSpec::make(2, 4.0);
    ResonanceQuery q;
    q.T = 16;
    q.theta = 0;
    for (auto s : {PairSign::Plus, PairSign::Minus}) {
        CHECK(count_S2(q, s, t) == oracle::S2(q, s, t));
        q.k = make_mode({2, 1});
        CHECK(count_S2(q, s, t) == oracle::S2(q, s, t));
        CHECK(enumerate_S2(q, s, t).size() == count_S2(q, s, t));
        q.k = Mode{};
    }
}

TEST_CASE("infeasible window gives the empty set") {
    const auto t = TorusSpec::make(2, 4.0);
    ResonanceQuery q;
    q.T = 4;
    q.theta = 0;
    q.m = 1e3;
    CHECK(enumerate_S3(q, t).empty());
    CHECK(count_S2(q, PairSign::Plus, t) == 0);
}

TEST_CASE("S3 enumeration is self-consistent and translation invariant") {
    const auto t = TorusSpec::make(2, 5.0);
    ResonanceQuery q;
    q.T = 5;
    q.theta = 0.1;
    q.k = make_mode({1, 0});
    const auto trip = enumerate_S3(q, t);
    CHECK(!trip.empty());
    for (const auto& [x, y, z] : trip) CHECK(in_S3(q, t, x, y, z));
    ResonanceQuery s = q;
    const Mode sh = make_mode({3, -2});
    s.k += sh;
    s.a += sh;
    s.b += sh;
    s.c += sh;
    CHECK(count_S3(s, t) == trip.size());
}

TEST_CASE("rho and Q") {
    const auto t = TorusSpec::make(2, 16.0);
    auto p = PhysParams::from_alpha(0.1, 8.0, t);
    auto r = rho_and_Q(p, t);
    CHECK(r.rho == doctest::Approx(0.8));
    CHECK(r.Q == doctest::Approx(256.0));
    p = PhysParams::from_alpha(0.1, 64.0, t);
    r = rho_and_Q(p, t);
    CHECK(r.rho == doctest::Approx(1.6));
    const auto r2 = rho_and_Q(PhysParams::from_alpha(0.3, 64.0, t), t);
    CHECK(r2.rho == doctest::Approx(3 * r.rho));
    CHECK(r2.Q == doctest::Approx(r.Q));
    CHECK_THROWS_AS(rho_and_Q(PhysParams::from_alpha(0.1, 300.0, t), t), ValidationError);
    const auto tg = TorusSpec::make(2, 16.0, {1.0, std::sqrt(2.0)}, true);
    CHECK(rho_and_Q(PhysParams::from_alpha(0.1, 300.0, tg), tg).regime == "T>=L^2,generic");
    for (double T : {1.0, 3.0, 16.0, 100.0, 256.0}) {
        const auto rq = rho_and_Q(PhysParams::from_alpha(0.01, T, t), t);
        CHECK(rq.rho >= 0.01 * std::sqrt(T) - 1e-15);
        CHECK(rq.Q >= 1.0 - 1e-12);
    }
}
