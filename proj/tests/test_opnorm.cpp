#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "wkelab/expansion.hpp"

using namespace wkl;

namespace {
cplx wdot(const Series& a, const Series& b, const std::vector<double>& w) {
    cplx s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t m = 0; m < a[i].size(); ++m) s += w[i] * std::conj(a[i][m]) * b[i][m];
    return s;
}

Series rand_series(int P, std::size_t M, std::uint64_t seed) {
    Series v(P, std::vector<cplx>(M));
    for (int i = 0; i < P; ++i)
        for (std::size_t m = 0; m < M; ++m) v[i][m] = draw_eta(NoiseLaw::Gaussian, seed, m, i);
    return v;
}

struct Setup {
    TorusSpec t = TorusSpec::make(2, 3.0);
    std::shared_ptr<const ModeSet> ms = std::make_shared<const ModeSet>(t, 1.0);
    PhysParams p = PhysParams::from_alpha(0.4, 3.0, t);
    TimeGrid g = TimeGrid::resolving(p, t, 1.0, 1.0);
    Expansion ex = compute_Jn(oracle::random_field(ms, 5), p, 1, g);
};
}  // namespace

TEST_CASE("adjoints") {
    Setup s;
    for (auto sign : {SlotSign::Plus, SlotSign::Minus}) {
        LinearizedOperator op(s.ex.J[0], s.ex.J[1], s.ms, s.p, s.g, sign);
        const auto v = rand_series(s.g.points(), s.ms->size(), 1);
        const auto u = rand_series(s.g.points(), s.ms->size(), 2);
        const cplx lhs = wdot(op.apply(v), u, op.weights());
        const cplx rhs = wdot(v, op.adjoint(u), op.weights());
        CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(lhs));
    }
}

TEST_CASE("power iteration agrees with the dense matrix") {
    Setup s;
    for (auto sign : {SlotSign::Plus, SlotSign::Minus})
        for (int n1 : {0, 1}) {
            LinearizedOperator op(s.ex.J[n1], s.ex.J[0], s.ms, s.p, s.g, sign);
            const double dense = oracle::dense_opnorm(op, s.ms->size(), s.g.points());
            const auto pw = linearized_operator_norm(s.ex.J[n1], s.ex.J[0], s.ms, s.p, s.g, sign,
                                                     2000, 1e-12);
            CHECK(pw.converged);
            CHECK(pw.norm == doctest::Approx(dense).epsilon(1e-4));
        }
}
