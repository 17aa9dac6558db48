#include <cmath>

#include "doctest.h"
#include "wkelab/errors.hpp"
#include "wkelab/expansion.hpp"

using namespace wkl;

TEST_CASE("worst term: direct lattice sums match the Poisson-reduced form") {
    const auto prof = Profile::gaussian(1.0, 1.0);
    for (double L : {8.0, 16.0})
        for (int r : {1, 2, 3}) {
            const auto t = TorusSpec::make(2, L);
            const auto p = PhysParams::from_alpha(0.01, std::pow(L, 1.5), t);
            const auto w = worst_term(r, p, t, prof, WorstChoice::standard(), 800);
            CHECK(w.t == doctest::Approx(1.0 / std::sqrt(L)));
            CHECK(std::abs(w.A_direct - w.A_reduced) <= 1e-9 * std::abs(w.A_reduced));
            CHECK(w.J_value > 0);
        }
}

TEST_CASE("worst term: r = 1 is the plain time integral") {
    const auto t = TorusSpec::make(2, 8.0);
    const auto p = PhysParams::from_alpha(0.01, 4.0, t);
    const auto w = worst_term(1, p, t, Profile::gaussian(), WorstChoice::standard(), 100);
    CHECK(w.t == 1.0);
    CHECK(std::abs(w.A_direct - 1.0) < 1e-12);
}

TEST_CASE("worst term: preconditions") {
    const auto prof = Profile::gaussian();
    const auto tb = TorusSpec::make(2, 8.0, {1.0, 1.5});
    CHECK_THROWS_AS(worst_term(2, PhysParams::from_alpha(0.01, 8, tb), tb, prof, WorstChoice::standard()),
                    ValidationError);
    const auto t = TorusSpec::make(2, 8.0);
    CHECK_THROWS_AS(worst_term(2, PhysParams::from_alpha(0.01, 64, t), t, prof, WorstChoice::standard()),
                    ValidationError);
    WorstChoice bad = WorstChoice::standard();
    bad.z = make_mode({0, 0});
    CHECK_THROWS_AS(worst_term(2, PhysParams::from_alpha(0.01, 8, t), t, prof, bad), ValidationError);
}
