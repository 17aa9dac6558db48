#include <cmath>

#include "wkelab/errors.hpp"
#include "wkelab/expansion.hpp"

namespace wkl {

LinearizedOperator::LinearizedOperator(const Series& J1, const Series& J2,
                                       std::shared_ptr<const ModeSet> modes,
                                       const PhysParams& p, const TimeGrid& grid, SlotSign sign)
    : J1_(J1), J2_(J2), ev_(std::move(modes), p), grid_(grid), sign_(sign),
      w_(time_weights(grid)) {
    require(static_cast<int>(J1.size()) == grid.points() &&
                static_cast<int>(J2.size()) == grid.points(),
            "opnorm: background series do not match the grid");
}

Series LinearizedOperator::apply(const Series& v) {
    const std::size_t M = ev_.modes().size();
    Series F(grid_.points(), std::vector<cplx>(M));
    std::vector<cplx> vc(M);
    for (int i = 0; i < grid_.points(); ++i) {
        if (sign_ == SlotSign::Plus) {
            ev_.apply(J1_[i].data(), J2_[i].data(), v[i].data(), grid_.s(i), F[i].data());
        } else {
            for (std::size_t m = 0; m < M; ++m) vc[m] = std::conj(v[i][m]);
            ev_.apply(J1_[i].data(), vc.data(), J2_[i].data(), grid_.s(i), F[i].data());
        }
    }
    return duhamel_integral(F, grid_);
}

// Adjoint with respect to sum_i w_i <u_i, v_i>.  Pointwise in time:
//   v -> W(b, c, v)(s)        has adjoint  u -> -W(c, b, u)(s)
//   w -> W(b, conj w, d)(s)   has adjoint  u -> conj W(b, u, d)(s)
// (Omega is symmetric under k <-> k2, so the phase is unchanged), and the trapezoid integrator contributes its transposed weights.
Series LinearizedOperator::adjoint(const Series& u) {
    const int P = grid_.points();
    const std::size_t M = ev_.modes().size();
    const double h = grid_.ds();
    Series y(P, std::vector<cplx>(M));
    std::vector<cplx> tail(M, 0.0);  // sum_{i > j} w_i u_i
    for (int j = P - 1; j >= 0; --j) {
        for (std::size_t m = 0; m < M; ++m) {
            const cplx wu = w_[j] * u[j][m];
            const cplx z = j == 0 ? 0.5 * h * tail[m] : 0.5 * h * wu + h * tail[m];
            y[j][m] = z / w_[j];
            tail[m] += wu;
        }
    }
    Series out(P, std::vector<cplx>(M));
    for (int j = 0; j < P; ++j) {
        if (sign_ == SlotSign::Plus) {
            ev_.apply(J2_[j].data(), J1_[j].data(), y[j].data(), grid_.s(j), out[j].data());
            for (auto& z : out[j]) z = -z;
        } else {
            ev_.apply(J1_[j].data(), y[j].data(), J2_[j].data(), grid_.s(j), out[j].data());
            for (auto& z : out[j]) z = std::conj(z);
        }
    }
    return out;
}

namespace {
double dot_re(const Series& a, const Series& b, const std::vector<double>& w) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double r = 0;
        for (std::size_t m = 0; m < a[i].size(); ++m) r += std::real(std::conj(a[i][m]) * b[i][m]);
        s += w[i] * r;
    }
    return s;
}
}  // namespace

OpNorm linearized_operator_norm(const Series& J1, const Series& J2,
                                std::shared_ptr<const ModeSet> modes, const PhysParams& p,
                                const TimeGrid& grid, SlotSign sign, int max_iter, double tol,
                                std::uint64_t seed) {
    LinearizedOperator op(J1, J2, modes, p, grid, sign);
    const auto& w = op.weights();
    Series v(grid.points(), std::vector<cplx>(modes->size()));
    for (int i = 0; i < grid.points(); ++i)
        for (std::size_t m = 0; m < modes->size(); ++m)
            v[i][m] = draw_eta(NoiseLaw::Gaussian, seed, m, static_cast<std::uint64_t>(i));
    OpNorm out;
    double nv = std::sqrt(dot_re(v, v, w));
    double prev = -1;
    for (int it = 1; it <= max_iter; ++it) {
        for (auto& row : v)
            for (auto& z : row) z /= nv;
        const Series Pv = op.apply(v);
        const double lam = dot_re(Pv, Pv, w);
        out.iterations = it;
        out.norm = std::sqrt(lam);
        if (lam == 0.0) {
            out.converged = true;
            return out;
        }
        if (prev >= 0 && std::abs(lam - prev) <= tol * lam) {
            out.converged = true;
            return out;
        }
        prev = lam;
        v = op.adjoint(Pv);
        nv = std::sqrt(dot_re(v, v, w));
        if (!std::isfinite(nv) || nv == 0) throw NumericalFailure("opnorm: power iteration broke down");
    }
    throw NumericalFailure("opnorm: power iteration did not converge in " +
                           std::to_string(max_iter) + " iterations");
}

}  // namespace wkl
