#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "wkelab/errors.hpp"
#include "wkelab/expansion.hpp"

using namespace wkl;

namespace {
double rel(const Series& a, const Series& b) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t m = 0; m < a[i].size(); ++m) {
            num += std::norm(a[i][m] - b[i][m]);
            den += std::norm(b[i][m]);
        }
    return std::sqrt(num / den);
}
}  // namespace

TEST_CASE("duhamel integral is exact on linear data") {
    const TimeGrid g{10};
    Series F(g.points(), std::vector<cplx>(2));
    for (int i = 0; i < g.points(); ++i) F[i] = {cplx(1, 2), cplx(g.s(i), 0)};
    const auto I = duhamel_integral(F, g);
    for (int i = 0; i < g.points(); ++i) {
        CHECK(std::abs(I[i][0] - g.s(i) * cplx(1, 2)) < 1e-14);
        CHECK(std::abs(I[i][1] - 0.5 * g.s(i) * g.s(i)) < 1e-14);
    }
}

TEST_CASE("first iterate against its closed form") {
    const auto t = TorusSpec::make(2, 3.0);
    auto ms = std::make_shared<const ModeSet>(t, 1.0);
    const auto p = PhysParams::from_alpha(0.2, 2.0, t);
    const auto f = oracle::random_field(ms, 8);
    const auto g = TimeGrid::resolving(p, t, 1.0, 0.002);
    const auto ex = compute_Jn(f, p, 1, g);
    const double kappa = p.alpha * p.T / 9.0;
    // J1_k(1) = -i kappa [ -|a_k|^2 a_k + sum^x a1 conj(a2) a3 (e(T Om) - 1) / (2 pi i T Om) ]
    double num = 0, den = 0;
    for (std::size_t k = 0; k < ms->size(); ++k) {
        cplx acc = -std::norm(f.a[k]) * f.a[k];
        for (std::size_t i1 = 0; i1 < ms->size(); ++i1)
            for (std::size_t i3 = 0; i3 < ms->size(); ++i3) {
                if (i1 == k || i3 == k) continue;
                const long i2 = ms->find((*ms)[i1] + (*ms)[i3] - (*ms)[k]);
                if (i2 < 0) continue;
                const double om = omega((*ms)[i1], (*ms)[i2], (*ms)[i3], (*ms)[k], t);
                const cplx x = f.a[i1] * std::conj(f.a[i2]) * f.a[i3];
                const double w = 2 * std::numbers::pi * p.T * om;
                acc += std::abs(w) < 1e-12 ? x : x * (std::exp(cplx(0, w)) - 1.0) / cplx(0, w);
            }
        const cplx ref = cplx(0, -kappa) * acc;
        num += std::norm(ex.J[1].back()[k] - ref);
        den += std::norm(ref);
    }
    CHECK(std::sqrt(num / den) < 1e-4);
    CHECK(!ex.resolution_warning);
    const auto coarse = compute_Jn(f, p, 1, TimeGrid{2});
    CHECK(coarse.resolution_warning);
}

TEST_CASE("sum of tree terms equals the Picard iterate") {
    const auto t = TorusSpec::make(2, 4.0);
    auto ms = std::make_shared<const ModeSet>(t, 0.75);
    const auto p = PhysParams::from_alpha(0.3, 3.0, t);
    const auto f = oracle::random_field(ms, 2);
    const auto g = TimeGrid::resolving(p, t, 0.75);
    const auto ex = compute_Jn(f, p, 3, g);
    for (int n = 0; n <= 3; ++n) {
        Series sum(g.points(), std::vector<cplx>(ms->size()));
        for (const auto& tr : enumerate_trees(n)) sum = axpy(sum, 1.0, compute_JT(tr, f, p, g));
        CHECK(rel(sum, ex.J[n]) < 1e-10);
    }
    CHECK_THROWS_AS(compute_Jn(f, p, 5, g), ValidationError);
}
