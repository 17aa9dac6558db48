#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "wkelab/ensemble.hpp"
#include "wkelab/nls.hpp"
#include "wkelab/trees.hpp"

namespace wkl {

/// Values on a TimeGrid: series[i][m] is mode m at s_i.
using Series = std::vector<std::vector<cplx>>;

/// I F(s) = int_0^s F, cumulative composite trapezoid on the grid.
Series duhamel_integral(const Series& F, const TimeGrid& grid);

/// I W(b, c, d) on the grid.
Series duhamel_cubic(CubicEvaluator& ev, const Series& b, const Series& c, const Series& d,
                     const TimeGrid& grid);

/// Constant-in-time series.
Series constant_series(const std::vector<cplx>& a, const TimeGrid& grid);

struct Expansion {
    std::vector<Series> J;  // J_0 .. J_nmax
    /// T * max|Omega| * ds; above 0.5 the trapezoid rule under-resolves the
    /// phases.
    double resolution = 0.0;
    bool resolution_warning = false;
};

/// Picard iterates J_n = sum_{n1+n2+n3=n-1} I W(J_n1, J_n2, J_n3), n_max <= 4.
Expansion compute_Jn(const SpectralField& in, const PhysParams& p, int n_max,
                     const TimeGrid& grid);

/// J_T by the subtree recursion; scale <= 3.  Identical subtrees are
/// computed once.
Series compute_JT(const TernaryTree& tree, const SpectralField& in, const PhysParams& p,
                  const TimeGrid& grid);

double resolution_number(const PhysParams& p, const TorusSpec& t, double K_max,
                         const TimeGrid& grid);

/// Trapezoid weights of the grid (the discrete L^2_s measure).
std::vector<double> time_weights(const TimeGrid& grid);

/// (sum_i w_i sum_k |v_k(s_i)|^2)^(1/2).
double l2_norm(const Series& v, const TimeGrid& grid);
double sup_norm(const Series& v);
Series axpy(const Series& x, double a, const Series& y);  // x + a y

// ---------------------------------------------------------------- worst term

struct WorstChoice {
    Mode k, q, z;  // x = k - q, y = z + q

    /// k = (1,1), q = (1,0), z = (1,-1), zero in higher coordinates.
    static WorstChoice standard() { return {make_mode({1, 1}), make_mode({1, 0}), make_mode({1, -1})}; }
};

struct WorstTerm {
    int r = 0;
    double t = 0.0;
    cplx A_direct;   // lattice sums inside the simplex integral
    cplx A_reduced;  // Poisson-reduced: L^d n_hat(2 T q s) factors
    double J_value = 0.0;  // (alpha T / L^d)^r |A| sqrt(n(x) n(y) n(z))
    double rho = 0.0;
};

/// The chain tree of scale r whose left leaf at each step pairs with the
/// right leaf of the next.  Requires beta = 1, T <= L^(2 - delta) and
/// q.(k - q) = q.(q - z) = 0 with q != 0.  The reduced route needs a
/// Gaussian profile.
WorstTerm worst_term(int r, const PhysParams& p, const TorusSpec& t, const Profile& n_in,
                     const WorstChoice& choice, int quad_points = 2000);

// ------------------------------------------------------------ operator norm

enum class SlotSign { Plus, Minus };

struct OpNorm {
    double norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// ||P|| on l^2_k L^2_s of the grid for
///   P+ v = I W(J1, J2, v),   P- v = I W(J1, v, J2),
/// by power iteration on P* P.  P- is antilinear; its norm is that of the
/// linear map w -> P-(conj w).
OpNorm linearized_operator_norm(const Series& J1, const Series& J2,
                                std::shared_ptr<const ModeSet> modes, const PhysParams& p,
                                const TimeGrid& grid, SlotSign sign, int max_iter = 500,
                                double tol = 1e-9, std::uint64_t seed = 1);

/// Applies the linear map (P+ v, or w -> P-(conj w)) and its adjoint in the
/// trapezoid-weighted inner product; exposed for the dense oracle.
class LinearizedOperator {
public:
    LinearizedOperator(const Series& J1, const Series& J2, std::shared_ptr<const ModeSet> modes,
                       const PhysParams& p, const TimeGrid& grid, SlotSign sign);
    Series apply(const Series& v);
    Series adjoint(const Series& u);
    const std::vector<double>& weights() const { return w_; }

private:
    const Series& J1_;
    const Series& J2_;
    CubicEvaluator ev_;
    TimeGrid grid_;
    SlotSign sign_;
    std::vector<double> w_;
};

}  // namespace wkl
