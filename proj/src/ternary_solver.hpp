#pragma once

// Solves  c1 - c2 + c3 = k,  -2 Q(c1-k, c3-k) in an omega window,  with each
// c_i confined to a ball or pinned to a point.  One child is iterated and the
// omega constraint, which is linear in the other child once the first is
// fixed, is solved along a pivot coordinate.  Every candidate is re-checked
// with the exact predicates, so the interval arithmetic only has to be
// conservative.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "wkelab/lattice.hpp"

namespace wkl::detail {

struct Domain {
    bool fixed = false;
    Mode point;  // when fixed
    Ball ball;   // otherwise

    static Domain at(const Mode& m) {
        Domain d;
        d.fixed = true;
        d.point = m;
        return d;
    }
    static Domain in(const Ball& b) {
        Domain d;
        d.ball = b;
        return d;
    }
    bool contains(const Mode& m, int dim) const {
        return fixed ? m == point : ball.contains(m, dim);
    }
    int lo(int j) const { return fixed ? point.idx[j] : ball.center.idx[j] - ball.reach(); }
    int hi(int j) const { return fixed ? point.idx[j] : ball.center.idx[j] + ball.reach(); }
    double weight(int dim) const {
        if (fixed) return 1.0;
        double w = 1.0;
        for (int j = 0; j < dim; ++j) w *= 2.0 * ball.reach() + 1.0;
        return w;
    }
    template <class F>
    void for_each(int dim, F&& f) const {
        if (fixed)
            f(point);
        else
            for_each_in_ball(ball, dim, f);
    }
};

enum class Degeneracy {
    Exclude,    // k not in {c1, c3}
    AllowFull,  // ... or c1 = c2 = c3 = k
};

inline bool degeneracy_ok(Degeneracy rule, const Mode& k, const Mode& c1, const Mode& c2,
                          const Mode& c3) {
    if (c1 != k && c3 != k) return true;
    return rule == Degeneracy::AllowFull && c1 == k && c2 == k && c3 == k;
}

/// Canonical window test: omega in L^2 units via the factored form.
inline bool window_ok(const TorusSpec& t, const OmegaWindow& w, const Mode& k, const Mode& c1,
                      const Mode& c3) {
    return w.contains(-2.0 * q_form_scaled(c1 - k, c3 - k, t));
}

template <class F>
void solve_ternary(const TorusSpec& t, const Mode& k, const Domain& d1, const Domain& d2,
                   const Domain& d3, const OmegaWindow& w, Degeneracy rule, F&& visit) {
    const int dim = t.d;

    auto emit = [&](const Mode& c1, const Mode& c2, const Mode& c3) {
        if (!d1.contains(c1, dim) || !d2.contains(c2, dim) || !d3.contains(c3, dim)) return;
        if (!degeneracy_ok(rule, k, c1, c2, c3)) return;
        if (!window_ok(t, w, k, c1, c3)) return;
        visit(c1, c2, c3);
    };

    // Iterate whichever of c1 / c3 is cheaper; omega is symmetric in them.
    const bool swap = d3.weight(dim) < d1.weight(dim);
    const Domain& outer = swap ? d3 : d1;
    const Domain& inner = swap ? d1 : d3;
    auto emit_oi = [&](const Mode& o, const Mode& c2, const Mode& i) {
        if (swap)
            emit(i, c2, o);
        else
            emit(o, c2, i);
    };

    if (d2.fixed && !outer.fixed && !inner.fixed) {
        outer.for_each(dim, [&](const Mode& o) { emit_oi(o, d2.point, k + d2.point - o); });
        return;
    }

    const double wlo = w.lo(), whi = w.hi();
    outer.for_each(dim, [&](const Mode& o) {
        const Mode u = o - k;
        if (u.is_zero()) {
            if (rule == Degeneracy::AllowFull) emit_oi(o, k, k);
            return;
        }
        if (inner.fixed) {
            emit_oi(o, o + inner.point - k, inner.point);
            return;
        }
        if (d2.fixed) {
            emit_oi(o, d2.point, k + d2.point - o);
            return;
        }
        int p = 0;
        double best = -1;
        for (int j = 0; j < dim; ++j) {
            const double a = std::abs(t.beta[j] * u.idx[j]);
            if (a > best) {
                best = a;
                p = j;
            }
        }
        const double bp = t.beta[p] * u.idx[p];
        // c2_j = o_j + i_j - k_j must stay inside d2's box.
        std::array<int, kMaxDim> lo{}, hi{};
        for (int j = 0; j < dim; ++j) {
            lo[j] = std::max(inner.lo(j), d2.lo(j) - o.idx[j] + k.idx[j]);
            hi[j] = std::min(inner.hi(j), d2.hi(j) - o.idx[j] + k.idx[j]);
            if (lo[j] > hi[j]) return;
        }
        Mode c;
        std::array<int, kMaxDim> cur = lo;
        while (true) {
            double rest = 0;
            for (int j = 0; j < dim; ++j) {
                if (j == p) continue;
                rest += t.beta[j] * static_cast<double>(static_cast<long long>(u.idx[j]) *
                                                        (cur[j] - k.idx[j]));
            }
            // -2 (bp * v + rest) in [wlo, whi]  =>  bp * v in [-whi/2 - rest, -wlo/2 - rest]
            double a = (-whi / 2 - rest) / bp;
            double b = (-wlo / 2 - rest) / bp;
            if (a > b) std::swap(a, b);
            const double pad = 1e-7 * (1.0 + std::abs(a) + std::abs(b));
            const double vlo = std::ceil(a - pad), vhi = std::floor(b + pad);
            const double ilo = std::max<double>(lo[p], vlo + k.idx[p]);
            const double ihi = std::min<double>(hi[p], vhi + k.idx[p]);
            for (int j = 0; j < dim; ++j) c.idx[j] = cur[j];
            for (long ip = static_cast<long>(ilo); ip <= static_cast<long>(ihi); ++ip) {
                c.idx[p] = static_cast<int>(ip);
                emit_oi(o, o + c - k, c);
            }
            int j = dim - 1;
            while (j >= 0 && (j == p || cur[j] == hi[j])) {
                if (j != p) cur[j] = lo[j];
                --j;
            }
            if (j < 0) break;
            ++cur[j];
        }
    });
}

}  // namespace wkl::detail
