#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "quadrature.hpp"
#include "wkelab/errors.hpp"
#include "wkelab/parallel.hpp"
#include "wkelab/simd.hpp"
#include "wkelab/wke.hpp"

namespace wkl {

using detail::gl_panel;
constexpr double kPi = std::numbers::pi;

double Kernel::operator()(double x) const {
    switch (kind) {
        case Kind::Delta:
            return x == 0.0 ? INFINITY : 0.0;
        case Kind::Gaussian:
            return std::exp(-x * x / (2 * param * param)) / (std::sqrt(2 * kPi) * param);
        case Kind::Sinc2:
            return param * simd::sinc2(param * x);
    }
    return 0.0;
}

namespace {

void check_kernel(const Kernel& K) {
    if (K.kind == Kernel::Kind::Gaussian) require(K.param > 0, "kernel: sigma must be positive");
    if (K.kind == Kernel::Kind::Sinc2) require(K.param > 0, "kernel: t must be positive");
}

// ---------------------------------------------------------------- Gaussian phi
//
// With u = xi1 - xi, v = xi3 - xi every factor is exp(-(c + a u + b v)^2 / w^2)
// per coordinate, with (a, b) = (0,0) for phi, (1,0) phi1, (1,1) phi2, (0,1)
// phi3, and Omega = -2 sum_j beta_j u_j v_j.  Under e(tau Omega) each term of
// the bracket is a product over coordinates of complex 2x2 Gaussian integrals.

struct Term {
    double sign;
    std::array<std::array<int, 2>, 3> f;
};

constexpr std::array<Term, 4> kTerms{{
    {+1, {{{1, 0}, {1, 1}, {0, 1}}}},
    {-1, {{{0, 0}, {1, 1}, {0, 1}}}},
    {+1, {{{0, 0}, {1, 0}, {0, 1}}}},
    {-1, {{{0, 0}, {1, 0}, {1, 1}}}},
}};

// int B e(tau Omega) du dv for the Gaussian profile.
cplx gaussian_transform(const Profile& phi, const TorusSpec& torus, const double* xi,
                        double tau) {
    const double iw2 = 1.0 / (phi.width * phi.width);
    const double A3 = phi.amp * phi.amp * phi.amp;
    cplx total = 0;
    for (const Term& term : kTerms) {
        double P11 = 0, P12 = 0, P22 = 0, sa = 0, sb = 0;
        for (const auto& ab : term.f) {
            P11 += ab[0] * ab[0];
            P12 += ab[0] * ab[1];
            P22 += ab[1] * ab[1];
            sa += ab[0];
            sb += ab[1];
        }
        cplx prod = A3;
        for (int j = 0; j < torus.d; ++j) {
            const double c = xi[j];
            const cplx p12 = cplx(P12 * iw2, 2 * kPi * tau * torus.beta[j]);
            const double p11 = P11 * iw2, p22 = P22 * iw2;
            const cplx det = p11 * p22 - p12 * p12;
            const double r1 = c * iw2 * sa, r2 = c * iw2 * sb;
            // r^T P^-1 r
            const cplx quad = (p22 * r1 * r1 - 2.0 * p12 * r1 * r2 + p11 * r2 * r2) / det;
            prod *= kPi / std::sqrt(det) * std::exp(quad - 3 * c * c * iw2);
        }
        total += term.sign * prod;
    }
    return total;
}

double gaussian_route(const Profile& phi, const Kernel& K, const TorusSpec& torus,
                      const double* xi) {
    // tau0: where the imaginary parts of P become comparable to the real ones.
    const double tau0 = 1.0 / (2 * kPi * torus.beta_max() * phi.width * phi.width);
    double acc = 0;
    auto add = [&](double tau, double w) {
        double wh = 1.0;
        if (K.kind == Kernel::Kind::Gaussian)
            wh = std::exp(-2 * kPi * kPi * K.param * K.param * tau * tau);
        else if (K.kind == Kernel::Kind::Sinc2)
            wh = std::max(0.0, 1.0 - tau / K.param);
        acc += w * wh * gaussian_transform(phi, torus, xi, tau).real();
    };
    constexpr int kNodes = 20;
    if (K.kind == Kernel::Kind::Sinc2) {
        // Geometric panels on [0, t]; the tent has its kink at t only.
        double a = 0, b = std::min(tau0, K.param);
        while (a < K.param) {
            gl_panel(a, b, kNodes, add);
            a = b;
            b = std::min(2 * b, K.param);
        }
    } else {
        // tau = tau0 x / (1 - x), geometric panels towards x = 1.  The
        // integrand decays like tau^-d, so the mapped one stays bounded.
        double a = 0, b = 0.5;
        for (int p = 0; p < 40; ++p) {
            gl_panel(a, b, kNodes, [&](double x, double w) {
                const double om = 1 - x;
                add(tau0 * x / om, w * tau0 / (om * om));
            });
            a = b;
            b = 0.5 * (1 + b);
        }
    }
    return 2 * acc;
}

// ---------------------------------------------------------------- generic, d = 2
//
// u = xi1 - xi in polar coordinates; v = s e + r e_perp with e parallel to
// beta u, so Omega = -2 |beta u| s.  Substituting x = Omega leaves
//   int rho drho dtheta / (2 |beta u|) int dr int dx K(x) B(xi, u, v(x, r)).

double bracket(const Profile& phi, const TorusSpec& torus, const double* xi, const double* u,
               const double* v) {
    double x1[kMaxDim] = {}, x2[kMaxDim] = {}, x3[kMaxDim] = {};
    for (int j = 0; j < torus.d; ++j) {
        x1[j] = xi[j] + u[j];
        x3[j] = xi[j] + v[j];
        x2[j] = xi[j] + u[j] + v[j];
    }
    const double f = phi(xi, torus), f1 = phi(x1, torus), f2 = phi(x2, torus),
                 f3 = phi(x3, torus);
    return f1 * f2 * f3 - f * f2 * f3 + f * f1 * f3 - f * f1 * f2;
}

double generic_route(const Profile& phi, const Kernel& K, const TorusSpec& torus,
                     const double* xi, const Quadrature& q) {
    require(torus.d == 2, "collision_K: non-Gaussian profiles need d = 2");
    require(q.n_rho > 0 && q.n_theta > 0 && q.n_perp > 0 && q.n_omega > 0,
            "collision_K: quadrature sizes must be positive");
    const double R = q.radius > 0 ? q.radius : phi.K_max + std::hypot(xi[0], xi[1]);
    const double b1 = torus.beta[0], b2 = torus.beta[1];
    double acc = 0;
    for (int it = 0; it < q.n_theta; ++it) {
        const double th = 2 * kPi * it / q.n_theta;
        const double c = std::cos(th), s = std::sin(th);
        gl_panel(0.0, R, q.n_rho, [&](double rho, double wrho) {
            const double bu1 = b1 * rho * c, bu2 = b2 * rho * s;
            const double bn = std::hypot(bu1, bu2);
            if (bn == 0) return;
            const double e1 = bu1 / bn, e2 = bu2 / bn;
            const double u[2] = {rho * c, rho * s};
            const double jac = wrho * rho / (2 * bn) * (2 * kPi / q.n_theta);
            const double X = 2 * bn * R;
            auto along = [&](double r, double wr) {
                auto at = [&](double x, double wx) {
                    const double sv = -x / (2 * bn);
                    const double v[2] = {sv * e1 - r * e2, sv * e2 + r * e1};
                    acc += jac * wr * wx * bracket(phi, torus, xi, u, v);
                };
                switch (K.kind) {
                    case Kernel::Kind::Delta:
                        at(0.0, 1.0);
                        break;
                    case Kernel::Kind::Gaussian: {
                        const double Xg = std::min(X, 8 * K.param);
                        gl_panel(-Xg, Xg, q.n_omega,
                                 [&](double x, double w) { at(x, w * K(x)); });
                        break;
                    }
                    case Kernel::Kind::Sinc2: {
                        // four lobes of g per panel
                        const int panels = std::max(1, static_cast<int>(std::ceil(X * K.param / 2)));
                        const double h = 2 * X / panels;
                        for (int p = 0; p < panels; ++p)
                            gl_panel(-X + p * h, -X + (p + 1) * h, q.n_omega,
                                     [&](double x, double w) { at(x, w * K(x)); });
                        break;
                    }
                }
            };
            gl_panel(-R, R, q.n_perp, along);
        });
    }
    return acc;
}

}  // namespace

double collision_K(const Profile& phi, const Kernel& K, const TorusSpec& torus,
                   const double* xi, const Quadrature& quad) {
    check_kernel(K);
    double v;
    if (phi.kind == Profile::Kind::Gaussian)
        v = gaussian_route(phi, K, torus, xi);
    else if (phi.kind == Profile::Kind::Constant)
        v = 0.0;
    else
        v = generic_route(phi, K, torus, xi, quad);
    if (!std::isfinite(v)) throw NumericalFailure("collision_K: non-finite value");
    return v;
}

double integral_K_t(const Profile& phi, double t, const TorusSpec& torus, const double* xi,
                    const Quadrature& quad) {
    require(t > 0, "integral_K_t: t must be positive");
    return std::pow(torus.L, 2 * torus.d) / t * collision_K(phi, Kernel::sinc2(t), torus, xi, quad);
}

CollisionMoments collision_moments(const Profile& phi, const Kernel& K, const TorusSpec& torus,
                                   int n, double R, const Quadrature& quad) {
    require(n > 0 && R > 0, "collision_moments: need n > 0 and R > 0");
    const int d = torus.d;
    std::size_t total = 1;
    for (int j = 0; j < d; ++j) total *= n;
    require(total <= 1'000'000, "collision_moments: grid too large");
    const double h = 2 * R / n;
    CollisionMoments m;
    m.values.resize(total);
    auto point = [&](std::size_t i, double* xi) {
        std::size_t r = i;
        for (int j = d - 1; j >= 0; --j) {
            xi[j] = -R + h * (static_cast<double>(r % n) + 0.5);
            r /= n;
        }
    };
    parallel_for(total, [&](std::size_t i) {
        double xi[kMaxDim] = {};
        point(i, xi);
        m.values[i] = collision_K(phi, K, torus, xi, quad);
    });
    const double dv = std::pow(h, d);
    for (std::size_t i = 0; i < total; ++i) {
        double xi[kMaxDim] = {};
        point(i, xi);
        double e = 0;
        for (int j = 0; j < d; ++j) e += torus.beta[j] * xi[j] * xi[j];
        m.mass += m.values[i] * dv;
        m.energy += e * m.values[i] * dv;
        m.abs += std::abs(m.values[i]) * dv;
    }
    return m;
}

double sinc2_integral(double W, int per_unit) {
    require(W >= 1 && per_unit > 0, "sinc2_integral: need W >= 1 and per_unit > 0");
    const int n = static_cast<int>(std::round(W));
    double acc = 0;
    for (int i = 0; i < n; ++i)
        gl_panel(i, i + 1, per_unit, [&](double x, double w) { acc += w * simd::sinc2(x); });
    return 2 * acc + 1.0 / (kPi * kPi * n);
}

double measured_sinc2_constant() {
    static const double c = sinc2_integral();
    return c;
}

}  // namespace wkl
