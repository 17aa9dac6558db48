#include <algorithm>

#include "ternary_solver.hpp"
#include "wkelab/errors.hpp"
#include "wkelab/lattice.hpp"

namespace wkl {

namespace {

void check_query(const ResonanceQuery& q) {
    require(q.T > 0, "resonance query: T must be positive");
    require(q.theta >= 0, "resonance query: theta must be nonnegative");
}

template <class F>
void walk_S3(const ResonanceQuery& q, const TorusSpec& t, F&& f) {
    check_query(q);
    const double r = window_radius_idx(t, q.theta);
    using detail::Domain;
    detail::solve_ternary(t, q.k, Domain::in(Ball{q.a, r}), Domain::in(Ball{q.b, r}),
                          Domain::in(Ball{q.c, r}), OmegaWindow::make(q.m, q.T, t),
                          detail::Degeneracy::Exclude, f);
}

// omega_2 in L^2 units for the pair (x, y) with y solved from the constraint.
double omega2_scaled(PairSign sign, const TorusSpec& t, const Mode& x, const Mode& y,
                     const Mode& k) {
    // x + y = k:  |x|^2 + |y|^2 - |k|^2 = -2 Q(x, y)
    // x - y = k:  |x|^2 - |y|^2 - |k|^2 =  2 Q(k, y)
    return sign == PairSign::Plus ? -2.0 * q_form_scaled(x, y, t) : 2.0 * q_form_scaled(k, y, t);
}

template <class F>
void walk_S2(const ResonanceQuery& q, PairSign sign, const TorusSpec& t, F&& f) {
    check_query(q);
    const double r = window_radius_idx(t, q.theta);
    const Ball bx{q.a, r};
    for_each_in_ball(bx, t.d, [&](const Mode& x) {
        const Mode y = sign == PairSign::Plus ? q.k - x : x - q.k;
        if (in_S2(q, sign, t, x, y)) f(x, y);
    });
}

}  // namespace

bool in_S3(const ResonanceQuery& q, const TorusSpec& t, const Mode& x, const Mode& y,
           const Mode& z) {
    if (x - y + z != q.k) return false;
    if (x == q.k || z == q.k) return false;
    const double r = window_radius_idx(t, q.theta);
    if (!Ball{q.a, r}.contains(x, t.d) || !Ball{q.b, r}.contains(y, t.d) ||
        !Ball{q.c, r}.contains(z, t.d))
        return false;
    return detail::window_ok(t, OmegaWindow::make(q.m, q.T, t), q.k, x, z);
}

bool in_S2(const ResonanceQuery& q, PairSign sign, const TorusSpec& t, const Mode& x,
           const Mode& y) {
    if ((sign == PairSign::Plus ? x + y : x - y) != q.k) return false;
    if (sign == PairSign::Minus && x == y) return false;
    const double r = window_radius_idx(t, q.theta);
    if (!Ball{q.a, r}.contains(x, t.d) || !Ball{q.b, r}.contains(y, t.d)) return false;
    return OmegaWindow::make(q.m, q.T, t).contains(omega2_scaled(sign, t, x, y, q.k));
}

std::vector<Triple> enumerate_S3(const ResonanceQuery& q, const TorusSpec& t) {
    std::vector<Triple> out;
    walk_S3(q, t, [&](const Mode& x, const Mode& y, const Mode& z) { out.push_back({x, y, z}); });
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t count_S3(const ResonanceQuery& q, const TorusSpec& t) {
    std::uint64_t n = 0;
    walk_S3(q, t, [&](const Mode&, const Mode&, const Mode&) { ++n; });
    return n;
}

std::vector<Pair> enumerate_S2(const ResonanceQuery& q, PairSign sign, const TorusSpec& t) {
    std::vector<Pair> out;
    walk_S2(q, sign, t, [&](const Mode& x, const Mode& y) { out.emplace_back(x, y); });
    return out;
}

std::uint64_t count_S2(const ResonanceQuery& q, PairSign sign, const TorusSpec& t) {
    std::uint64_t n = 0;
    walk_S2(q, sign, t, [&](const Mode&, const Mode&) { ++n; });
    return n;
}

}  // namespace wkl
