#pragma once

#include <map>
#include <string>
#include <vector>

#include "surf4/surface.hpp"

namespace surf4 {

/// (u, v, 0, 0).
ParametricSurface plane_surface(Domain d = {-1, 1, -1, 1});

/// (cos u, sin u, cos v, sin v).
ParametricSurface clifford_torus(Domain d = {0, 6.283185307179586, 0, 6.283185307179586});

/// (cosh u cos v, cosh u sin v, u, 0), minimal inside a hyperplane.
ParametricSurface catenoid(Domain d = {-1, 1, 0, 6.283185307179586});

/// Graph of w -> w^2 over the complex line: (u, v, u^2 - v^2, 2uv).
ParametricSurface holomorphic_square(Domain d = {0.5, 1.5, 0.5, 1.5});

/// A (sinh u cos v, -sinh u sin v, -cos(bu) sinh(bv)/b, sin(bu) sinh(bv)/b)
/// with A^2 = 1/(1+b^2): minimal of general type, conformal, and in
/// canonical parameters (E sqrt|mu^2-nu^2| = 1).
ParametricSurface weierstrass_surface(double b = 0.5, Domain d = {0.2, 1.2, 0.2, 1.2});

/// (f cos v, f sin v, g cos(kv), g sin(kv)) with f = A sinh u,
/// g = (A/k) cosh(ku), A^2 = 1/|k^2-1|: a rotational minimal surface with
/// gamma1 = 0. Requires k > 0, k != 1.
ParametricSurface closed_rotational(double k = 2.0, Domain d = {0.8, 1.2, 0, 6.283185307179586});

/// Builds a builtin by name from key=value parameters (u_min, u_max, v_min,
/// v_max, and b or k where applicable). Throws ParseError for an unknown
/// name or parameter.
ParametricSurface builtin_surface(const std::string& name,
                                  const std::map<std::string, double>& params = {});

std::vector<std::string> builtin_names();

}  // namespace surf4
