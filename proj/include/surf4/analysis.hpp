#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <utility>

#include "surf4/surface.hpp"
#include "surf4/tolerances.hpp"

namespace surf4 {

/// Index of a second partial: z_uu, z_uv, z_vv.
enum Pair : std::size_t { UU = 0, UV = 1, VV = 2 };

/// First fundamental form, normal frame and the decomposition
/// z_ij = G^1_ij z_u + G^2_ij z_v + c^1_ij e1 + c^2_ij e2.
struct FundamentalData {
    double E = 0, F = 0, G = 0, W = 0;
    std::array<std::array<double, 3>, 2> christoffel{};  // [k][pair]
    std::array<std::array<double, 3>, 2> c{};            // [k][pair]
    Vec4 e1, e2;
    SurfaceJet jet;
    double decomposition_residual = 0;

    double gamma(std::size_t k, Pair p) const { return christoffel[k - 1][p]; }
    double coeff(std::size_t k, Pair p) const { return c[k - 1][p]; }
    /// Normal part of the second partial.
    Vec4 sigma(Pair p) const { return c[0][p] * e1 + c[1][p] * e2; }
};

struct InvariantSet {
    double L = 0, M = 0, N = 0;
    double k = 0, kappa = 0, K = 0;
    Vec4 H;
    Vec4 ellipse_center;
    std::pair<double, double> ellipse_semiaxes{0, 0};
    /// Second fundamental form on the orthonormal tangent frame
    /// x = z_u/sqrt(E), y = (z_v - (F/E) z_u) sqrt(E)/W.
    Vec4 sigma_xx, sigma_xy, sigma_yy;
};

enum class PointClass { Flat, MinimalSuperConformal, MinimalGeneralType, NonMinimal };

std::string_view to_string(PointClass c);

/// Throws Degenerate when W <= tol_reg, FDFailure on non-finite data.
FundamentalData fundamental_forms(const ParametricSurface& s, double u, double v,
                                  const Tolerances& tol = {});

/// Same decomposition with the normal frame rotated by `theta`
/// (e1' = cos e1 + sin e2, e2' = -sin e1 + cos e2); coefficients are
/// re-projected from the stored second partials.
FundamentalData rotate_normal_frame(const FundamentalData& fd, double theta);

struct LMN {
    double L = 0, M = 0, N = 0;
};
LMN lmn_coefficients(const FundamentalData& fd);

InvariantSet invariants(const FundamentalData& fd);
InvariantSet invariants(const ParametricSurface& s, double u, double v,
                        const Tolerances& tol = {});

/// Normalised minimality defect |kappa^2 - k| / (|K|+1)^2.
double minimality_defect(const InvariantSet& inv);
/// Normalised super-conformality defect |K^2 - kappa^2| / (|K|+1)^2.
double superconformal_defect(const InvariantSet& inv);

PointClass classify_point(const InvariantSet& inv, const Tolerances& tol = {});

/// Semi-axes (descending) of the ellipse traced by H + cos(t) p + sin(t) q.
std::pair<double, double> ellipse_axes(const Vec4& p, const Vec4& q);
std::pair<double, double> ellipse_axes(const InvariantSet& inv);

struct AnalysisSweep {
    Grid2 grid;
    Field2<FundamentalData> data;
    Field2<InvariantSet> invariants;
    Field2<PointClass> classes;
    std::array<std::size_t, 4> histogram{};  // indexed by PointClass

    std::size_t count(PointClass c) const { return histogram[static_cast<std::size_t>(c)]; }
};

AnalysisSweep analyze_grid(const ParametricSurface& s, const Grid2& grid,
                           const Tolerances& tol = {});

}  // namespace surf4
