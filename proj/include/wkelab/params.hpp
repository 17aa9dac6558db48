#pragma once

#include "wkelab/lattice.hpp"

namespace wkl {

/// Scaling-law state of one experiment.  alpha = lambda^2 L^-d and
/// T_kin = alpha^-2 are kept consistent by the factories.
struct PhysParams {
    double lambda = 0.0;
    double alpha = 0.0;
    double T = 1.0;
    double T_kin = 0.0;
    double delta = 0.1;

    static PhysParams from_lambda(double lambda, double T, const TorusSpec& t,
                                  double delta = 0.1);
    static PhysParams from_alpha(double alpha, double T, const TorusSpec& t,
                                 double delta = 0.1);

    /// Prefactor alpha T / L^d of the mode equation.
    double coupling(const TorusSpec& t) const;
};

}  // namespace wkl
