#pragma once

#include "surf4/canonical.hpp"
#include "surf4/natural.hpp"

namespace surf4 {

/// Metric factors and frame invariants at one lattice node.
struct FrameCoefficients {
    double sqrtE = 1, sqrtG = 1;
    double nu = 0, mu = 0, gamma1 = 0, gamma2 = 0, beta1 = 0, beta2 = 0;
};

/// Linear system Z_u = A Z, Z_v = B Z for the frame rows Z = (x, y, n1, n2).
struct FrameSystem {
    Grid2 grid;
    Field2<FrameCoefficients> coeff;

    static Mat4 A_of(const FrameCoefficients& c);
    static Mat4 B_of(const FrameCoefficients& c);
    Mat4 A(std::size_t i, std::size_t j) const { return A_of(coeff(i, j)); }
    Mat4 B(std::size_t i, std::size_t j) const { return B_of(coeff(i, j)); }
    ScalarField E() const;
    ScalarField G() const;
};

/// System carried by an analysed surface in semi-canonical parameters.
FrameSystem frame_system(const InvariantField& field);

/// Strongly regular canonical data: E = G = |mu^2-nu^2|^(-1/2),
/// gamma1 = (|mu^2-nu^2|^(1/4))_v, gamma2 = (|mu^2-nu^2|^(1/4))_u,
/// beta1 = -|mu^2-nu^2|^(1/4) (ln sqrt|(mu+nu)/(mu-nu)|)_v, beta2 likewise with u.
/// Lattice derivatives are fourth-order differences.
FrameSystem canonical_frame_system(const ScalarField& mu, const ScalarField& nu,
                                   const Tolerances& tol = {});

/// gamma1 = 0 canonical data on the lattice (mu.u, v_axis): E = 1,
/// G = |mu^2-nu^2|^(-1/2), gamma2 = (ln|mu^2-nu^2|)_u / 4,
/// beta2 = (ln|(mu+nu)/(mu-nu)|)_u / 2, beta1 = 0.
FrameSystem gamma1_zero_frame_system(const ScalarProfile& mu, const ScalarProfile& nu,
                                     const Axis& v_axis, const Tolerances& tol = {});

/// max |A_v - B_u + AB - BA| over interior nodes, lattice derivatives by
/// fourth-order differences.
double integrability_defect(const FrameSystem& sys);

struct FrameIntegration {
    Field2<Frame4> frames;
    ScalarField orthonormality;  // per node
    double max_orthonormality_defect = 0;
    /// Largest frame difference between the u-then-v and v-then-u paths on a
    /// 5x5 probe sublattice.
    double path_defect = 0;
    bool drift_exceeded = false;
};

/// RK4 along the first v-line in u, then along every u = const line in v,
/// coefficients at half steps by cubic interpolation. Starts at node (0, 0).
/// No re-orthonormalisation. Throws CompatibilityRejected when the
/// integrability defect is at or above admit_tol.
FrameIntegration integrate_frame(const FrameSystem& sys, const Frame4& initial,
                                 const Tolerances& tol = {});

struct PositionIntegration {
    Field2<Vec4> points;
    ScalarField closure;  // per cell, (nu-1) x (nv-1)
    double max_closure_defect = 0;
};

/// Simpson quadrature of z_u = sqrt(E) x along the first v-line, then of
/// z_v = sqrt(G) y along each u = const line. Throws ClosureExceeded when
/// a cell loop integral exceeds drift_tol.
PositionIntegration integrate_position(const Field2<Frame4>& frames, const ScalarField& E,
                                       const ScalarField& G, const Vec4& origin,
                                       const Tolerances& tol = {});

struct ReconstructionResult {
    Grid2 grid;
    Field2<Vec4> surface;
    Field2<Frame4> frames;
    ScalarField E, G;
    double compatibility_residual = 0;
    double integrability_defect = 0;
    double orthonormality_defect = 0;
    double path_defect = 0;
    double closure_defect = 0;
    bool drift_exceeded = false;
    /// Largest normalised |kappa^2 - k| of the re-analysed chart, and whether
    /// every checked node classifies as minimal of general type. Checked
    /// nodes lie 4 steps inside the boundary (1 on lattices under 9 nodes).
    double reanalysis_minimality = 0;
    bool reanalysis_general_type = false;

    ParametricSurface chart() const { return sampled_chart(surface); }
};

/// Throws CompatibilityRejected when the natural-equation residual or the
/// integrability defect reaches admit_tol, DegenerateInvariants when
/// |mu^2-nu^2| or one of its lattice derivatives vanishes.
ReconstructionResult reconstruct_from_invariants(const ScalarField& mu, const ScalarField& nu,
                                                 const Frame4& initial, const Vec4& origin,
                                                 const Tolerances& tol = {});

ReconstructionResult reconstruct_gamma1_zero(const ScalarProfile& mu, const ScalarProfile& nu,
                                             const Axis& v_axis, const Frame4& initial,
                                             const Vec4& origin, const Tolerances& tol = {});

}  // namespace surf4
