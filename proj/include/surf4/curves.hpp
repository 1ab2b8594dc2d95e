#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "surf4/geom4.hpp"

namespace surf4 {

/// Finite-difference weights for the derivative of order `order` at `x0`
/// over arbitrary distinct nodes (Fornberg's recursion).
std::vector<double> fd_weights(double x0, std::span<const double> nodes, int order);

/// Value and derivatives 1..4 of a curve at t from a centred nine-point
/// stencil of step h.
std::array<Vec4, 5> curve_derivatives(const std::function<Vec4(double)>& c, double t, double h);

/// Curvatures of a curve in R^4 in any parametrisation, from its first four
/// derivatives. kappa and tau are non-negative; sigma is signed with e4
/// completing (e1, e2, e3) to a positive frame. When the third derivative
/// lies in the osculating plane (tau below `planar_tol` times the scale)
/// tau is reported as measured and sigma as zero.
struct FrenetData {
    double kappa = 0, tau = 0, sigma = 0;
    Frame4 frame;  // (e1, e2, e3, e4); e3, e4 are zero for planar curves
    bool planar = false;
};

FrenetData frenet(const Vec4& d1, const Vec4& d2, const Vec4& d3, const Vec4& d4,
                  double planar_tol = 1e-9);

/// Unit vector orthogonal to a, b, c with det[a b c result] > 0.
Vec4 positive_completion(const Vec4& a, const Vec4& b, const Vec4& c);

/// Largest principal angle (as a sine) between span{p1, p2} and span{q1, q2};
/// both pairs must be orthonormal.
double plane_distance(const Vec4& p1, const Vec4& p2, const Vec4& q1, const Vec4& q2);

}  // namespace surf4
