#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "wkelab/ensemble.hpp"
#include "wkelab/lattice.hpp"
#include "wkelab/params.hpp"

namespace wkl {

/// Uniform grid s_i = i/steps on [0, 1].
struct TimeGrid {
    int steps = 1;

    double ds() const { return 1.0 / steps; }
    double s(int i) const { return static_cast<double>(i) / steps; }
    int points() const { return steps + 1; }

    /// Coarsest grid with ds <= c / (T (2 K_max)^2 beta_max), never fewer
    /// than min_steps.
    static TimeGrid resolving(const PhysParams& p, const TorusSpec& t, double K_max,
                              double c = 0.1, int min_steps = 16);
    /// Throws ValidationError when ds violates the rule above.
    void check(const PhysParams& p, const TorusSpec& t, double K_max, double c = 0.1) const;
};

/// W(b, c, d)_k(s) = -i kappa (-b_k conj(c_k) d_k
///                  + sum^x b_k1 conj(c_k2) d_k3 e(T Omega s)),  kappa = alpha T / L^d,
/// where sum^x runs over k1 - k2 + k3 = k with k not in {k1, k3}.
///
/// The sum is evaluated as a full convolution of twisted fields on a zero
/// padded grid, and the k1 = k / k3 = k rows are removed afterwards:
///   full = sum^x + b_k <c, d> + d_k <c, b> - b_k conj(c_k) d_k,
/// so W = -i kappa (full - b_k <c, d> - d_k <c, b>) with <c, d> = sum conj(c) d.
class CubicEvaluator {
public:
    CubicEvaluator(std::shared_ptr<const ModeSet> modes, const PhysParams& p);

    void apply(const cplx* b, const cplx* c, const cplx* d, double s, cplx* out);
    void apply(const cplx* a, double s, cplx* out) { apply(a, a, a, s, out); }

    double kappa() const { return kappa_; }
    const ModeSet& modes() const { return *modes_; }
    std::shared_ptr<const ModeSet> mode_set() const { return modes_; }
    int grid_n() const { return n_; }

private:
    void to_grid(const cplx* a, double s, std::vector<cplx>& g);

    std::shared_ptr<const ModeSet> modes_;
    double kappa_, T_, L2_;
    int n_;
    std::vector<std::size_t> pos_;
    std::vector<double> turns_;  // L^2 |k|_beta^2
    std::vector<cplx> gb_, gc_, gd_, tmp_;
};

/// Convenience wrapper: W(a, a, a) at time s.
SpectralField twisted_cubic(const SpectralField& field, double s, const PhysParams& p);

struct Trajectory {
    TimeGrid grid;
    int save_every = 1;
    std::vector<double> s;
    std::vector<std::vector<cplx>> a;
};

/// Classical RK4 for d a / ds = W(a, a, a)(s) over [0, 1].  Fields are kept
/// every save_every steps plus the endpoint.
Trajectory integrate(const SpectralField& field_in, const PhysParams& p, const TimeGrid& grid,
                     int save_every = 1);

/// |a_k(s)|^2 per saved time.  Gauge phases never touch the moduli, so these
/// are also the densities of the original field at t = T s.
std::vector<std::vector<double>> wick_unwrap(const Trajectory& tr);

struct EnsembleConfig {
    TorusSpec torus;
    PhysParams params;
    Profile profile;
    NoiseLaw law = NoiseLaw::Gaussian;
    double K_max = 6.0;
    double c = 0.1;
    int save_every = 0;  // 0: endpoint only
    std::uint64_t budget = 2'000'000'000ULL;  // modes * times * samples
};

struct EnsembleDensity {
    std::shared_ptr<const ModeSet> modes;
    std::vector<double> s;  // saved times
    /// channel = time_index * modes + mode_index
    EnsembleStats stats;
};

EnsembleDensity ensemble_density(const EnsembleConfig& cfg, std::uint64_t samples,
                                 std::uint64_t seed);

/// E|a_k(1)|^2 - n_in(k) from the same samples as |a_k(1)|^2 - |a_k(0)|^2.
/// The controlled estimate also subtracts 2 Re(conj(a_k(0)) J1_k(1)), J1 by
/// the Simpson rule that RK4 reduces to at first order; its mean is exactly 0 (the
/// only pairing is the k1 = k3 = k diagonal, which is imaginary), so the
/// mean is unchanged while the first-order noise drops out.
///
/// With symmetrize, each sample's values are averaged over the orbit of k
/// under the coordinate sign flips and permutations that preserve beta and
/// n_in on the mode set; the law and the flow are invariant under them, so
/// the means are unchanged.
struct DensityIncrement {
    std::shared_ptr<const ModeSet> modes;
    std::vector<double> n_in;
    /// channel i: raw increment; channel M + i: controlled increment
    EnsembleStats stats;
    int steps = 0;
    int symmetries = 1;  // group elements used
};

DensityIncrement density_increment(const EnsembleConfig& cfg, std::uint64_t samples,
                                   std::uint64_t seed, bool symmetrize = false);

}  // namespace wkl
