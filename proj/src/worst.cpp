#include <cmath>
#include <map>
#include <numbers>

#include "wkelab/errors.hpp"
#include "wkelab/expansion.hpp"

namespace wkl {

namespace {

long long idot(const Mode& a, const Mode& b, int d) {
    long long s = 0;
    for (int j = 0; j < d; ++j) s += static_cast<long long>(a.idx[j]) * b.idx[j];
    return s;
}

// (f * g)(x_i) on a uniform grid by the trapezoid rule.
std::vector<cplx> convolve(const std::vector<cplx>& f, const std::vector<cplx>& g, double h) {
    const std::size_t n = f.size();
    std::vector<cplx> out(n);
    for (std::size_t i = 1; i < n; ++i) {
        cplx s = 0.5 * (f[0] * g[i] + f[i] * g[0]);
        for (std::size_t j = 1; j < i; ++j) s += f[j] * g[i - j];
        out[i] = h * s;
    }
    return out;
}

// Integral over s_0 + ... + s_r = t of prod_{j=1}^{r-1} S(s_j), with S
// tabulated on the grid of [0, t].
cplx simplex_integral(int r, const std::vector<cplx>& S, double h) {
    std::vector<cplx> f(S.size(), 1.0);
    for (int j = 1; j < r; ++j) f = convolve(f, S, h);
    const std::vector<cplx> one(S.size(), 1.0);
    return convolve(f, one, h).back();
}

}  // namespace

WorstTerm worst_term(int r, const PhysParams& p, const TorusSpec& t, const Profile& n_in,
                     const WorstChoice& ch, int quad_points) {
    require(r >= 1 && r <= 6, "worst_term: r must be in [1, 6]");
    require(quad_points >= 16, "worst_term: need at least 16 quadrature points");
    for (int j = 0; j < t.d; ++j) require(t.beta[j] == 1.0, "worst_term: needs beta = 1");
    require(p.T <= std::pow(t.L, 2.0 - p.delta) * (1 + 1e-12),
            "worst_term: needs T <= L^(2 - delta)");
    const int d = t.d;
    require(!ch.q.is_zero(), "worst_term: q must be nonzero");
    require(idot(ch.q, ch.k - ch.q, d) == 0 && idot(ch.q, ch.q - ch.z, d) == 0,
            "worst_term: choice violates q.(k-q) = q.(q-z) = 0");

    WorstTerm out;
    out.r = r;
    out.t = std::min(1.0, t.L / p.T);
    out.rho = rho_and_Q(p, t).rho;
    const double h = out.t / (quad_points - 1);
    const double L2 = t.L * t.L;

    // S(s) = sum_l e(-2 T s q.l) n_in(l); q.l is an integer over L^2, so
    // group the lattice by it once.
    std::map<long long, double> w;
    const double cut = n_in.K_max;
    for_each_in_ball(Ball{Mode{}, cut * t.L}, d,
                     [&](const Mode& l) { w[idot(ch.q, l, d)] += n_in.at(l, t); });
    std::vector<cplx> Sd(quad_points), Sr(quad_points);
    double qn = 0;
    for (int j = 0; j < d; ++j) qn += (ch.q.idx[j] / t.L) * (ch.q.idx[j] / t.L);
    const bool gaussian = n_in.kind == Profile::Kind::Gaussian;
    for (int i = 0; i < quad_points; ++i) {
        const double s = i * h;
        cplx acc = 0;
        for (const auto& [m, wt] : w) {
            const double ph = -2.0 * p.T * s * static_cast<double>(m) / L2;
            const double fr = ph - std::nearbyint(ph);
            acc += wt * std::polar(1.0, 2.0 * std::numbers::pi * fr);
        }
        Sd[i] = acc;
        if (gaussian) {
            // L^d n_hat(2 T s q), n_hat of amp * e^{-|x|^2 / w^2}
            const double wd = n_in.width;
            const double zeta2 = 4.0 * p.T * p.T * s * s * qn;
            const double pi = std::numbers::pi;
            Sr[i] = std::pow(t.L, d) * n_in.amp * std::pow(std::sqrt(pi) * wd, d) *
                    std::exp(-pi * pi * wd * wd * zeta2);
        }
    }
    out.A_direct = simplex_integral(r, Sd, h);
    out.A_reduced = gaussian ? simplex_integral(r, Sr, h) : cplx(NAN, NAN);
    const Mode x = ch.k - ch.q, y = ch.z + ch.q;
    const double amp = std::sqrt(n_in.at(x, t) * n_in.at(y, t) * n_in.at(ch.z, t));
    out.J_value = std::pow(p.coupling(t), r) * std::abs(out.A_direct) * amp;
    return out;
}

}  // namespace wkl
