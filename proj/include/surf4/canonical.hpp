#pragma once

#include <array>
#include <optional>
#include <vector>

#include "surf4/analysis.hpp"

namespace surf4 {

/// Geometric frame {x, y, n1, n2} of a minimal surface of general type with
///   sigma(x,x) = nu n1, sigma(x,y) = mu n2, mu > 0,
/// and the connection coefficients
///   gamma1 = <D_x x, y>, gamma2 = <D_y y, x>, beta1 = <D_x n1, n2>, beta2 = <D_y n1, n2>.
struct CanonicalFrameData {
    Frame4 frame;
    double nu = 0, mu = 0;
    double gamma1 = 0, gamma2 = 0, beta1 = 0, beta2 = 0;
    /// Angle from the input tangent x = z_u/sqrt(E) to the canonical x.
    double phi = 0;
    /// nu, mu for the other canonical pair (tangents turned by pi/4).
    double alt_nu = 0, alt_mu = 0;
    bool has_connection = false;
    bool near_superconformal = false;
};

/// Rotation angle phi in (-pi/8, pi/8] turning (x, y) into canonical
/// tangents, for sigma(x,x) = a e1 + b e2 and sigma(x,y) = c e1 + d e2 on a
/// minimal point. Throws SuperConformal when the ellipse is a circle.
double canonical_rotation_angle(double a, double b, double c, double d, double tol_gen = 1e-10);

/// Throws NotGeneralType unless the point classifies as MinimalGeneralType.
/// With `with_connection`, gamma1..beta2 are obtained by differencing the
/// frame field with step fd_step * extent.
CanonicalFrameData geometric_frame(const ParametricSurface& s, double u, double v,
                                   const Tolerances& tol = {}, bool with_connection = false);

/// Frame invariants sampled over a lattice of semi-canonical parameters.
struct InvariantField {
    Grid2 grid;
    Field2<CanonicalFrameData> nodes;
    ScalarField E, F, G;
    /// Root-sum-square residual of the least-squares beta fit per node.
    ScalarField beta_fit_residual;

    ScalarField extract(double CanonicalFrameData::*member) const;
    ScalarField nu() const { return extract(&CanonicalFrameData::nu); }
    ScalarField mu() const { return extract(&CanonicalFrameData::mu); }
    /// |mu^2 - nu^2| per node.
    ScalarField gap() const;
};

/// gamma1, gamma2 come from the metric, beta1, beta2 from a least-squares
/// fit of the four first-order Codazzi relations with differenced mu, nu.
/// Throws NotSemiCanonical when F or the parametric cross term
/// sigma(x,x).sigma(x,y) exceeds tol_canon (relative), BranchBreak when
/// mu^2, nu^2 or nu departs from the mean of its two neighbours by more
/// than jump_tol times the field maximum. The signed nu catches a line
/// where mu passes through 0 and the frame convention flips n2.
InvariantField frame_invariants_field(const ParametricSurface& s, const Grid2& grid,
                                      const Tolerances& tol = {});

/// The six Codazzi relations in semi-canonical parameters, written as
/// lhs - rhs, on the interior lattice. Derivatives are fourth-order
/// five-point differences (off-centre on the rows next to the boundary).
std::array<ScalarField, 6> codazzi_residuals(const InvariantField& field);

/// kappa + x(beta2) - y(beta1) + gamma1 beta1 - gamma2 beta2 on the interior
/// lattice, with kappa = 2 nu mu and the same differences.
ScalarField normal_connection_residual(const InvariantField& field);

enum class CanonicalVariant { StronglyRegular, Gamma1Zero };

struct CanonicalReport {
    bool is_canonical = false;
    double max_defect = 0;
    CanonicalVariant variant = CanonicalVariant::StronglyRegular;
};

/// StronglyRegular: E sqrt|mu^2-nu^2| = G sqrt|mu^2-nu^2| = 1.
/// Gamma1Zero: E = 1, G sqrt|mu^2-nu^2| = 1.
/// Without an explicit variant the one with the smaller defect is reported.
CanonicalReport check_canonical_parameters(const InvariantField& field,
                                           std::optional<CanonicalVariant> variant = {},
                                           const Tolerances& tol = {});

/// Monotone reparametrisation s(x) = x0 + int_{x0}^{x} sqrt(phi), built from
/// positive samples of phi on a uniform axis.
class ArcReparam {
public:
    ArcReparam(Axis axis, std::vector<double> phi);

    double forward(double x) const;
    double inverse(double s) const;
    double phi(double x) const;
    double phi_derivative(double x) const;
    double s_min() const { return cumulative_.front(); }
    double s_max() const { return cumulative_.back(); }

private:
    double integrate_cell(std::size_t cell, double to) const;

    Axis axis_;
    std::vector<double> phi_;
    std::vector<double> cumulative_;
};

/// New chart (s, t) -> z(U(s), V(t)) with s = u_min + int sqrt(phi(u)) du,
/// t = v_min + int sqrt(psi(v)) dv, where phi is E sqrt|mu^2-nu^2| (or E for
/// the Gamma1Zero variant) and psi is G sqrt|mu^2-nu^2|. Throws
/// LemmaViolated when phi depends on v or psi on u beyond lemma_tol.
ParametricSurface to_canonical_parameters(const ParametricSurface& s, const InvariantField& field,
                                          CanonicalVariant variant,
                                          const Tolerances& tol = {});

struct GeodesicSample {
    double s = 0, u = 0, v = 0, du = 0, dv = 0;
    Vec4 point, t, tprime;
};

struct GeodesicTrace {
    double step = 0;
    std::vector<GeodesicSample> samples;
};

/// Integrates the geodesic equations with classical RK4 from (u0, v0) along
/// the unit tangent `direction`. The default step is 1e-3 times the domain
/// diameter. Throws LeftDomain when the trace exits the chart and
/// PreconditionFailed when `direction` is not a unit tangent vector.
GeodesicTrace geodesic_trace(const ParametricSurface& s, double u0, double v0,
                             const Vec4& direction, double length, const Tolerances& tol = {},
                             double step = 0.0);

}  // namespace surf4
