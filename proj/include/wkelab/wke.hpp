#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "wkelab/ensemble.hpp"
#include "wkelab/lattice.hpp"
#include "wkelab/params.hpp"

namespace wkl {

// All brackets below use the orientation
//   B = phi1 phi2 phi3 - phi phi2 phi3 + phi phi1 phi3 - phi phi1 phi2
// for k1 - k2 + k3 = k, so that the gain term phi1 phi2 phi3 is positive.

/// Per-mode quasi-resonant lattice sum
///   S_t(k) = sum_{k1 - k2 + k3 = k} B g(t Omega)
/// with k1, k2, k3 all in |k| <= K_max, so constant profiles give exactly 0.
/// Cost O(M^2) per k.
double riemann_S_t(const Profile& phi, double t, const TorusSpec& torus, double K_max,
                   const Mode& k);
std::vector<double> riemann_S_t(const Profile& phi, double t, const TorusSpec& torus,
                                double K_max, const std::vector<Mode>& ks);

/// Approximate identities K(x) = int w_hat(tau) e(tau x) dtau used in place of
/// delta(Omega).
struct Kernel {
    enum class Kind {
        Delta,     // w_hat = 1
        Gaussian,  // e^{-x^2 / 2 sigma^2} / (sqrt(2 pi) sigma)
        Sinc2,     // t g(t x), w_hat = (1 - |tau|/t)_+
    };
    Kind kind = Kind::Sinc2;
    double param = 1.0;  // sigma or t

    static Kernel delta() { return {Kind::Delta, 0.0}; }
    static Kernel gaussian(double sigma) { return {Kind::Gaussian, sigma}; }
    static Kernel sinc2(double t) { return {Kind::Sinc2, t}; }
    double operator()(double x) const;
};

/// Quadrature controls for the generic (non-Gaussian) route, d = 2 only.
struct Quadrature {
    int n_rho = 48;     // radial nodes for xi1 - xi
    int n_theta = 64;   // angular nodes
    int n_perp = 48;    // nodes across the Omega direction
    int n_omega = 48;   // nodes along Omega per kernel panel
    double radius = 0;  // 0: derived from the profile's K_max
};

/// int B K(Omega) dxi1 dxi3 at xi.  Gaussian profiles use the exact
/// per-coordinate Gaussian integrals and one quadrature in tau; any other
/// profile uses the generic route.
double collision_K(const Profile& phi, const Kernel& K, const TorusSpec& torus,
                   const double* xi, const Quadrature& quad = {});

/// K_t(xi) = L^{2d} int B g(t Omega) dxi1 dxi3.
double integral_K_t(const Profile& phi, double t, const TorusSpec& torus, const double* xi,
                    const Quadrature& quad = {});

/// Null diagnostics of collision_K on the uniform midpoint grid of
/// [-R, R]^d with n points per axis.
struct CollisionMoments {
    double mass = 0.0;    // int K(phi)
    double energy = 0.0;  // int |xi|_beta^2 K(phi)
    double abs = 0.0;     // int |K(phi)|
    std::vector<double> values;
};
CollisionMoments collision_moments(const Profile& phi, const Kernel& K, const TorusSpec& torus,
                                   int n, double R, const Quadrature& quad = {});

/// int g over R, by quadrature on [-W, W] (W an integer) plus the tail
/// 1 / (pi^2 W), which is exact up to O(W^-3) there.
double sinc2_integral(double W = 200.0, int per_unit = 64);

/// The constant c in t int g(t x) f(x) dx -> c f(0), measured once.
double measured_sinc2_constant();

/// First-order kinetic prediction at physical time t = T s.  The lattice
/// route is n + 2 (alpha t / L^d)^2 S_t (the factor 2 is the Isserlis count of
/// the two Wick contractions of (k1, k3)); the continuum routes replace S_t
/// by L^{2d} / t times collision_K with the finite-t kernel, or with the exact
/// delta scaled by the measured sinc^2 constant.
struct KineticPrediction {
    std::vector<double> n_in;
    std::vector<double> lattice;
    std::vector<double> finite_t;
    std::vector<double> delta;
};

KineticPrediction kinetic_prediction(const Profile& n_in, double t, const PhysParams& p,
                                     const TorusSpec& torus, double K_max,
                                     const std::vector<Mode>& ks, bool continuum = true);

/// Exact Gaussian/circle moments of the first iterate at s:
///   E|J1|^2 = (alpha t / L^d)^2 [c2 sum^x n1 n2 n3 g(T Omega s) + c6 n_k^3]
///   E[conj(J0) J1] = i (alpha t / L^d) c4 n_k^2
/// with (c2, c4, c6) = (2, 2, 6) for the Gaussian law; for the circle law the
/// k1 = k3 terms carry 1 instead of 2 and c4 = c6 = 1.
struct ChaosMoments {
    double EJ1sq = 0.0;
    cplx EJ0J1;
    /// sum^x n1 n2 n3 g(T Omega s) alone (the sinc^2-weighted lattice sum).
    double lattice_sum = 0.0;
};
ChaosMoments first_iterate_moments(const Profile& n_in, NoiseLaw law, double s,
                                   const PhysParams& p, const TorusSpec& torus, double K_max,
                                   const Mode& k);

struct ChaosProbe {
    Mode k;
    ChaosMoments exact;
    double mc_J1sq = 0, se_J1sq = 0;
    double mc_re = 0, se_re = 0;  // Re E[conj(J0) J1]
    double mc_im = 0, se_im = 0;
    double z_J1sq = 0, z_re = 0, z_im = 0;
};

struct ChaosReport {
    std::vector<ChaosProbe> probes;
    std::uint64_t samples = 0;
    int steps = 0;
};

/// Monte Carlo over sampled data, with J1 from the numerical Picard iterate
/// on the resolving grid with safety factor c.
ChaosReport second_chaos_identity(const Profile& n_in, NoiseLaw law, const PhysParams& p,
                                  const TorusSpec& torus, double K_max,
                                  const std::vector<Mode>& probes, std::uint64_t samples,
                                  std::uint64_t seed, double c = 0.05);

// ----------------------------------------------------------------- gauss sums

/// G(s, n) = sum_{p=0}^n e(s p^2).
cplx gauss_sum(double s, int n);

struct DirichletCheck {
    long a = 0, q = 1;
    double dist = 0.0;   // |s - a/q|
    double bound = 0.0;  // n / (sqrt q (1 + n |s - a/q|^(1/2)))
    double value = 0.0;  // |G(s, n)|
};
DirichletCheck gauss_bound_check(double s, int n);

/// ||G(., n)||_{L^4[0,1]} by the exact uniform rule on N > 2 n^2 points with
/// integer phases.
double gauss_L4_quadrature(int n);
/// #{p in [0,n]^4 : p1^2 + p2^2 = p3^2 + p4^2}, i.e. ||G||_4^4.
std::uint64_t gauss_L4_count(int n);

}  // namespace wkl
