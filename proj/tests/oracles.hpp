#pragma once

// Slow, independent reference implementations.  Nothing here calls the
// fast paths it is compared against.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "wkelab/ensemble.hpp"
#include "wkelab/expansion.hpp"
#include "wkelab/lattice.hpp"
#include "wkelab/params.hpp"

namespace oracle {

using wkl::cplx;
using wkl::Mode;
using wkl::TorusSpec;

inline double bnorm(const Mode& m, const TorusSpec& t) {
    double s = 0;
    for (int j = 0; j < t.d; ++j) s += t.beta[j] * (m.idx[j] / t.L) * (m.idx[j] / t.L);
    return s;
}

inline bool in_ball(const Mode& m, const Mode& c, double r, int d) {
    double s = 0;
    for (int j = 0; j < d; ++j) s += double(m.idx[j] - c.idx[j]) * (m.idx[j] - c.idx[j]);
    return s <= r * r * (1 + 1e-12) + 1e-9;
}

template <class F>
void box(int d, int r, F&& f) {
    Mode m;
    std::vector<int> o(d, -r);
    while (true) {
        for (int j = 0; j < d; ++j) m.idx[j] = o[j];
        f(m);
        int j = d - 1;
        while (j >= 0 && o[j] == r) o[j--] = -r;
        if (j < 0) return;
        ++o[j];
    }
}

// |value - m| <= 1/T with the same relative tie slack as the library.
inline bool window(double value, double m, double T) {
    return std::abs(value - m) <= (1.0 / T) * (1 + 1e-9) + 1e-12;
}

/// #S3 by a plain loop over all (x, z) in the windows.
inline std::uint64_t S3(const wkl::ResonanceQuery& q, const TorusSpec& t) {
    const double r = std::pow(t.L, 1 + q.theta);
    const int R = static_cast<int>(std::floor(r)) + 1;
    std::uint64_t n = 0;
    box(t.d, R, [&](const Mode& dx) {
        const Mode x = q.a + dx;
        if (!in_ball(x, q.a, r, t.d) || x == q.k) return;
        box(t.d, R, [&](const Mode& dz) {
            const Mode z = q.c + dz;
            if (!in_ball(z, q.c, r, t.d) || z == q.k) return;
            const Mode y = x + z - q.k;
            if (!in_ball(y, q.b, r, t.d)) return;
            const double om = bnorm(x, t) - bnorm(y, t) + bnorm(z, t) - bnorm(q.k, t);
            if (window(om, q.m, q.T)) ++n;
        });
    });
    return n;
}

inline std::uint64_t S2(const wkl::ResonanceQuery& q, wkl::PairSign sign, const TorusSpec& t) {
    const double r = std::pow(t.L, 1 + q.theta);
    const int R = static_cast<int>(std::floor(r)) + 1;
    std::uint64_t n = 0;
    box(t.d, R, [&](const Mode& dx) {
        const Mode x = q.a + dx;
        if (!in_ball(x, q.a, r, t.d)) return;
        const Mode y = sign == wkl::PairSign::Plus ? q.k - x : x - q.k;
        if (!in_ball(y, q.b, r, t.d)) return;
        if (sign == wkl::PairSign::Minus && x == y) return;
        const double om = sign == wkl::PairSign::Plus ? bnorm(x, t) + bnorm(y, t) - bnorm(q.k, t)
                                                      : bnorm(x, t) - bnorm(y, t) - bnorm(q.k, t);
        if (window(om, q.m, q.T)) ++n;
    });
    return n;
}

inline cplx e(double x) {
    return std::exp(cplx(0, 2 * std::numbers::pi * x));
}

/// W(b, c, d)(s) by direct summation over k1 - k2 + k3 = k.
inline std::vector<cplx> W(const wkl::ModeSet& ms, const wkl::PhysParams& p, const cplx* b,
                           const cplx* c, const cplx* d, double s) {
    const auto& t = ms.torus();
    const double kappa = p.alpha * p.T / std::pow(t.L, t.d);
    std::vector<cplx> out(ms.size());
    for (std::size_t k = 0; k < ms.size(); ++k) {
        cplx acc = -b[k] * std::conj(c[k]) * d[k];
        for (std::size_t i1 = 0; i1 < ms.size(); ++i1) {
            if (i1 == k) continue;
            for (std::size_t i3 = 0; i3 < ms.size(); ++i3) {
                if (i3 == k) continue;
                const long i2 = ms.find(ms[i1] + ms[i3] - ms[k]);
                if (i2 < 0) continue;
                const double om = bnorm(ms[i1], t) - bnorm(ms[i2], t) + bnorm(ms[i3], t) -
                                  bnorm(ms[k], t);
                acc += b[i1] * std::conj(c[i2]) * d[i3] * e(p.T * om * s);
            }
        }
        out[k] = cplx(0, -kappa) * acc;
    }
    return out;
}

inline double g(double x) {
    if (x == 0) return 1;
    const double y = std::numbers::pi * x;
    return std::sin(y) * std::sin(y) / (y * y);
}

/// S_t(k) by the plain double loop with k2 = k1 + k3 - k.
inline double S_t(const wkl::Profile& phi, double t, const TorusSpec& tor, double K_max,
                  const Mode& k) {
    const wkl::ModeSet ms(tor, K_max);
    auto val = [&](const Mode& m) { return ms.find(m) >= 0 ? phi.at(m, tor) : 0.0; };
    const double f = val(k);
    double acc = 0;
    for (std::size_t i1 = 0; i1 < ms.size(); ++i1)
        for (std::size_t i3 = 0; i3 < ms.size(); ++i3) {
            const Mode k2 = ms[i1] + ms[i3] - k;
            if (ms.find(k2) < 0) continue;
            const double f1 = val(ms[i1]), f2 = val(k2), f3 = val(ms[i3]);
            const double B = f1 * f2 * f3 - f * f2 * f3 + f * f1 * f3 - f * f1 * f2;
            const double om = bnorm(ms[i1], tor) - bnorm(k2, tor) + bnorm(ms[i3], tor) - bnorm(k, tor);
            acc += B * g(t * om);
        }
    return acc;
}

/// Largest singular value of the linear map behind LinearizedOperator in the
/// weighted norm, from the assembled matrix.
inline double dense_opnorm(wkl::LinearizedOperator& op, std::size_t M, int P) {
    const auto& w = op.weights();
    const std::size_t n = M * P;
    Eigen::MatrixXcd A(n, n);
    wkl::Series v(P, std::vector<cplx>(M));
    for (std::size_t col = 0; col < n; ++col) {
        const int i = static_cast<int>(col / M);
        const std::size_t m = col % M;
        v[i][m] = 1.0;
        const wkl::Series y = op.apply(v);
        v[i][m] = 0.0;
        for (int r = 0; r < P; ++r)
            for (std::size_t q = 0; q < M; ++q)
                A(r * M + q, col) = std::sqrt(w[r]) * y[r][q] / std::sqrt(w[i]);
    }
    Eigen::MatrixXcd H = A.adjoint() * A;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    return std::sqrt(es.eigenvalues().maxCoeff());
}

inline wkl::SpectralField random_field(std::shared_ptr<const wkl::ModeSet> ms,
                                       std::uint64_t seed) {
    wkl::SpectralField f(ms);
    for (std::size_t i = 0; i < ms->size(); ++i)
        f.a[i] = wkl::draw_eta(wkl::NoiseLaw::Gaussian, seed, 7777 + i, 0);
    return f;
}

}  // namespace oracle
