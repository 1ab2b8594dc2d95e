#pragma once

#include <span>
#include <string>
#include <vector>

#include "surf4/canonical.hpp"

namespace surf4 {

/// Curve with constant curvatures v -> (a cos av, a sin av, b cos bv, b sin bv),
/// unit speed (a^2 alpha^2 + b^2 beta^2 = 1).
struct GeneratingCurve {
    double a = 0, b = 0, alpha = 1, beta = 1;
    double kappa = 0, tau = 0, sigma = 0;  // tau and sigma signed

    Vec4 point(double v) const;
    /// Frenet frame (t, n, b, b1) stored as (x, y, n1, n2).
    Frame4 frenet(double v) const;
};

/// Throws NotUnitSpeed when |a^2 alpha^2 + b^2 beta^2 - 1| > unit_tol,
/// CircleDegenerate when alpha == beta, PreconditionFailed when alpha or
/// beta is not positive.
GeneratingCurve make_generating_curve(double a, double b, double alpha, double beta,
                                      double unit_tol = 1e-12);

/// Meridian data (f, f', f'', g, g', g'') at one parameter value. For the
/// (A, B) representation the f slots hold A and the g slots hold B.
struct ProfileJet {
    double f = 0, fp = 0, fpp = 0, g = 0, gp = 0, gpp = 0;
};

enum class ProfileForm { FG, AB };

/// Meridian sampled on a u-lattice, interpolated between nodes by quintic
/// Hermite pieces (value, first and second derivative matched at nodes).
class MeridianProfile {
public:
    MeridianProfile(Axis u, std::vector<ProfileJet> nodes, ProfileForm form = ProfileForm::FG);
    /// Derivatives from fourth-order differences (at least 5 samples).
    static MeridianProfile from_samples(Axis u, std::span<const double> f,
                                        std::span<const double> g,
                                        ProfileForm form = ProfileForm::FG);

    const Axis& axis() const { return axis_; }
    const std::vector<ProfileJet>& nodes() const { return nodes_; }
    ProfileForm form() const { return form_; }
    ProfileJet at(double u) const;

    /// Converts (A, B) samples to (f, g) with the curve's constants; an FG
    /// profile is returned unchanged.
    MeridianProfile to_fg(const GeneratingCurve& curve) const;

    /// Set when an integrator stopped before the requested length.
    bool truncated = false;
    std::string note;

private:
    Axis axis_;
    std::vector<ProfileJet> nodes_;
    ProfileForm form_;
};

/// (f, g) from (A, B) at one point, derivatives included.
ProfileJet fg_from_ab(const ProfileJet& ab, const GeneratingCurve& curve);

/// Chart (f cos av, f sin av, g cos bv, g sin bv) over u in the profile
/// lattice and v in [0, 2 pi]. Throws IrregularProfile when f'^2+g'^2 or
/// alpha^2 f^2 + beta^2 g^2 falls to tol_reg at a node.
ParametricSurface surface_from_profile(const MeridianProfile& profile, double alpha, double beta,
                                       const Tolerances& tol = {});

/// Chart c(v) + A(u) n(v) + B(u) b1(v). Throws IrregularProfile when
/// A'^2+B'^2 or (kappa A - 1)^2 + (tau A - sigma B)^2 falls to tol_reg.
ParametricSurface surface_from_AB(const MeridianProfile& ab, const GeneratingCurve& curve,
                                  const Tolerances& tol = {});

/// (g'f'' - f'g'')/(f'^2+g'^2) - (alpha^2 f g' - beta^2 g f')/(alpha^2 f^2 + beta^2 g^2)
double minimality_residual(const ProfileJet& fg, double alpha, double beta);
/// The same condition written in A, B and the curvatures of the curve.
double minimality_residual_ab(const ProfileJet& ab, const GeneratingCurve& curve);

/// Unit-speed meridian f' = cos(theta), g' = sin(theta) with
/// theta' = (beta^2 g cos(theta) - alpha^2 f sin(theta)) / (alpha^2 f^2 + beta^2 g^2),
/// RK4 with step h_u starting at u = 0. Stops early (truncated = true) when
/// alpha^2 f^2 + beta^2 g^2 drops to tol_reg; throws Degenerate when that
/// happens at the start.
MeridianProfile solve_minimal_profile(double alpha, double beta, double f0, double g0,
                                      double theta0, double length, double h_u,
                                      const Tolerances& tol = {});

/// Numerical check of the curve properties of the family: v-curves have
/// constant curvatures given by nu, mu, gamma2, beta2, u-curves are plane
/// curves of curvature |nu| lying in span{x, n1}.
struct CurveFamilyReport {
    double v_curvature_variation = 0;  // sup over u0 of (max - min) over v, for kappa, tau, sigma
    double kappa_v_error = 0, tau_v_error = 0, sigma_v_error = 0;
    double v_span_distance = 0;  // span{n_v, b1_v} against span{x, n1}
    double u_curvature_error = 0;
    double u_torsion = 0;
    double u_span_distance = 0;  // osculating plane of the u-curve against span{x, n1}
    bool closed_forms_checked = false;

    bool passed(double constancy_tol = 1e-4, double closed_tol = 1e-4,
                double torsion_tol = 1e-5) const;
};

/// Throws PreconditionFailed unless every sample point is minimal of general
/// type with |gamma1| below 1e-5.
CurveFamilyReport verify_prop75(const ParametricSurface& s, std::span<const double> u0,
                                std::span<const double> v0, const Tolerances& tol = {});

/// The measurements of verify_prop75 without the minimality precondition;
/// closed forms are skipped (closed_forms_checked = false) and the u-curve
/// curvature is not compared.
CurveFamilyReport measure_curve_family(const ParametricSurface& s, std::span<const double> u0,
                                       std::span<const double> v0, const Tolerances& tol = {});

}  // namespace surf4
