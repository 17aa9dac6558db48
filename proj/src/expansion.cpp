#include <cmath>
#include <map>
#include <string>

#include "wkelab/errors.hpp"
#include "wkelab/expansion.hpp"

namespace wkl {

Series duhamel_integral(const Series& F, const TimeGrid& grid) {
    require(static_cast<int>(F.size()) == grid.points(), "duhamel: series/grid mismatch");
    const std::size_t M = F.empty() ? 0 : F[0].size();
    Series out(F.size(), std::vector<cplx>(M));
    const double h = 0.5 * grid.ds();
    for (std::size_t i = 1; i < F.size(); ++i)
        for (std::size_t m = 0; m < M; ++m) out[i][m] = out[i - 1][m] + h * (F[i - 1][m] + F[i][m]);
    return out;
}

Series duhamel_cubic(CubicEvaluator& ev, const Series& b, const Series& c, const Series& d,
                     const TimeGrid& grid) {
    Series F(grid.points(), std::vector<cplx>(ev.modes().size()));
    for (int i = 0; i < grid.points(); ++i)
        ev.apply(b[i].data(), c[i].data(), d[i].data(), grid.s(i), F[i].data());
    return duhamel_integral(F, grid);
}

Series constant_series(const std::vector<cplx>& a, const TimeGrid& grid) {
    return Series(grid.points(), a);
}

double resolution_number(const PhysParams& p, const TorusSpec& t, double K_max,
                         const TimeGrid& grid) {
    // |Omega| = 2 |Q(k1 - k, k3 - k)| <= 2 beta_max (2 K_max)^2
    return p.T * 8.0 * K_max * K_max * t.beta_max() * grid.ds();
}

Expansion compute_Jn(const SpectralField& in, const PhysParams& p, int n_max,
                     const TimeGrid& grid) {
    require(n_max >= 0 && n_max <= 4, "compute_Jn: n_max must be in [0, 4]");
    CubicEvaluator ev(in.modes, p);
    Expansion ex;
    ex.resolution = resolution_number(p, in.modes->torus(), in.modes->K_max(), grid);
    ex.resolution_warning = ex.resolution > 0.5;
    ex.J.push_back(constant_series(in.a, grid));
    const std::size_t M = in.size();
    std::vector<cplx> tmp(M);
    for (int n = 1; n <= n_max; ++n) {
        Series F(grid.points(), std::vector<cplx>(M));
        for (int n1 = 0; n1 <= n - 1; ++n1)
            for (int n2 = 0; n1 + n2 <= n - 1; ++n2) {
                const int n3 = n - 1 - n1 - n2;
                for (int i = 0; i < grid.points(); ++i) {
                    ev.apply(ex.J[n1][i].data(), ex.J[n2][i].data(), ex.J[n3][i].data(),
                             grid.s(i), tmp.data());
                    for (std::size_t m = 0; m < M; ++m) F[i][m] += tmp[m];
                }
            }
        ex.J.push_back(duhamel_integral(F, grid));
    }
    return ex;
}

namespace {
TernaryTree subtree_copy(const TernaryTree& t, int v) {
    if (t.is_leaf(v)) return TernaryTree::leaf();
    const auto& c = t.child[v];
    return TernaryTree::join(subtree_copy(t, c[0]), subtree_copy(t, c[1]), subtree_copy(t, c[2]));
}

const Series& jt_rec(const TernaryTree& t, CubicEvaluator& ev, const SpectralField& in,
                     const TimeGrid& grid, std::map<std::string, Series>& cache) {
    const std::string key = t.str();
    if (auto f = cache.find(key); f != cache.end()) return f->second;
    Series s;
    if (t.size() == 1) {
        s = constant_series(in.a, grid);
    } else {
        const auto& c = t.child[0];
        const Series& a = jt_rec(subtree_copy(t, c[0]), ev, in, grid, cache);
        const Series& b = jt_rec(subtree_copy(t, c[1]), ev, in, grid, cache);
        const Series& d = jt_rec(subtree_copy(t, c[2]), ev, in, grid, cache);
        s = duhamel_cubic(ev, a, b, d, grid);
    }
    return cache.emplace(key, std::move(s)).first->second;
}
}  // namespace

Series compute_JT(const TernaryTree& tree, const SpectralField& in, const PhysParams& p,
                  const TimeGrid& grid) {
    require(tree.scale() <= 3, "compute_JT: scale must be <= 3");
    CubicEvaluator ev(in.modes, p);
    std::map<std::string, Series> cache;
    return jt_rec(tree, ev, in, grid, cache);
}

std::vector<double> time_weights(const TimeGrid& grid) {
    std::vector<double> w(grid.points(), grid.ds());
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

double l2_norm(const Series& v, const TimeGrid& grid) {
    const auto w = time_weights(grid);
    double s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double r = 0;
        for (const auto& z : v[i]) r += std::norm(z);
        s += w[i] * r;
    }
    return std::sqrt(s);
}

double sup_norm(const Series& v) {
    double s = 0;
    for (const auto& row : v)
        for (const auto& z : row) s = std::max(s, std::abs(z));
    return s;
}

Series axpy(const Series& x, double a, const Series& y) {
    Series out = x;
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t m = 0; m < out[i].size(); ++m) out[i][m] += a * y[i][m];
    return out;
}

}  // namespace wkl
