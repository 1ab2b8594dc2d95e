#pragma once

#include <utility>

#include "surf4/grid.hpp"
#include "surf4/tolerances.hpp"

namespace surf4 {

/// Five-point Laplacian on the interior lattice. Throws GridTooSmall below 3x3.
ScalarField laplacian(const ScalarField& f);

struct FieldResiduals {
    ScalarField r1, r2;  // interior lattice

    double max_abs() const;
};

struct ProfileResiduals {
    ScalarProfile r1, r2;  // interior nodes

    double max_abs() const;
};

/// r1 = 1/4 sqrt|mu^2-nu^2| Lap ln|mu^2-nu^2| + nu^2 + mu^2
/// r2 = 1/2 sqrt|mu^2-nu^2| Lap ln|(mu+nu)/(mu-nu)| + 2 nu mu
/// Throws DegenerateInvariants where |mu^2-nu^2| <= tol_gen and DomainError
/// when mu^2-nu^2 changes sign on the lattice.
FieldResiduals pde_residuals_munu(const ScalarField& mu, const ScalarField& nu,
                                  const Tolerances& tol = {});

/// r1 = 1/8 (K^2-kappa^2)^(1/4) Lap ln(K^2-kappa^2) - K
/// r2 = 1/4 (K^2-kappa^2)^(1/4) Lap ln((K-kappa)/(K+kappa)) + kappa
FieldResiduals pde_residuals_Kkappa(const ScalarField& K, const ScalarField& kappa,
                                    const Tolerances& tol = {});

/// With l1 = ln|mu^2-nu^2| and l2 = ln|(mu+nu)/(mu-nu)|:
/// r1 = l1''/4 - l1'^2/16 + nu^2 + mu^2,  r2 = l2''/2 - l1' l2'/8 + 2 nu mu.
/// Throws DegenerateInvariants and BranchBreak as the field version.
ProfileResiduals ode_residuals(const ScalarProfile& mu, const ScalarProfile& nu,
                               const Tolerances& tol = {});

}  // namespace surf4
