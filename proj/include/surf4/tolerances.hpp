#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace surf4 {

/// Every named numerical threshold of the toolkit. Values can be overridden
/// by name (see `set`), which is how run configurations and `--tol` flags
/// reach the library.
struct Tolerances {
    double tol_ortho = 1e-9;    // orthonormality / orientation of frames
    double tol_rank = 1e-12;    // Gram-Schmidt and 4x4 pivots
    double tol_reg = 1e-10;     // W = sqrt(EG - F^2) regularity floor
    double tol_decomp = 1e-8;   // second-partial decomposition residual (relative)
    double tol_flat = 1e-7;     // max(|L|,|M|,|N|) below this is a flat point
    double tol_min = 1e-7;      // |kappa^2 - k| / (|K|+1)^2 below this is minimal
    double tol_sc = 1e-7;       // |K^2 - kappa^2| / (|K|+1)^2 below this is super-conformal
    double tol_gen = 1e-10;     // |mu^2 - nu^2| floor for general type
    double tol_canon = 1e-8;    // relative cross term sigma(x,x).sigma(x,y) of canonical tangents
    double jump_tol = 0.1;      // deviation of mu^2, nu^2, nu from the neighbours' mean, relative to the field maximum
    double lemma_tol = 1e-6;    // separation-of-variables check before reparametrisation
    double reparam_tol = 1e-6;  // canonical-parameter defect
    double admit_tol = 1e-3;    // compatibility gate for prescribed invariants
    double drift_tol = 1e-5;    // orthonormality drift and cell closure
    double fd_step = 1e-4;      // finite-difference step, scaled by the domain extent

    /// Returns false when `name` is unknown. Throws Error(ParseError) for a
    /// non-positive value.
    bool set(std::string_view name, double value);
    double get(std::string_view name) const;
    static std::vector<std::string> names();
};

}  // namespace surf4
