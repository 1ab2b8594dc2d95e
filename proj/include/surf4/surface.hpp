#pragma once

#include <functional>
#include <memory>

#include "surf4/geom4.hpp"
#include "surf4/grid.hpp"

namespace surf4 {

struct Domain {
    double u_min = 0.0, u_max = 1.0, v_min = 0.0, v_max = 1.0;

    double u_extent() const { return u_max - u_min; }
    double v_extent() const { return v_max - v_min; }
    double diameter() const { return std::hypot(u_extent(), v_extent()); }
    /// `slack` is relative to the extents.
    bool contains(double u, double v, double slack = 1e-12) const;
};

/// Position and partial derivatives up to second order at one parameter point.
struct SurfaceJet {
    Vec4 z, zu, zv, zuu, zuv, zvv;
};

/// A chart (u, v) -> R^4. Partials come from an analytic callback when one
/// is supplied, otherwise from central differences with step
/// fd_step * (domain extent) per axis.
class ParametricSurface {
public:
    using PositionFn = std::function<Vec4(double, double)>;
    using JetFn = std::function<SurfaceJet(double, double)>;

    ParametricSurface(Domain domain, PositionFn position, JetFn jet = {}, double fd_step = 1e-4);

    const Domain& domain() const { return domain_; }
    double fd_step() const { return fd_step_; }
    bool has_analytic_partials() const { return static_cast<bool>(jet_); }

    /// Throws Error(OutOfDomain) outside the domain.
    Vec4 position(double u, double v) const;
    /// Throws Error(OutOfDomain) outside the domain, Error(FDFailure) on
    /// non-finite output.
    SurfaceJet jet(double u, double v) const;

    /// Same chart with the analytic partials dropped (finite differences only).
    ParametricSurface without_partials(double fd_step) const;
    ParametricSurface without_partials() const { return without_partials(fd_step_); }
    ParametricSurface with_fd_step(double fd_step) const;

    /// Samples the position on a lattice.
    Field2<Vec4> sample(const Grid2& grid) const;

private:
    SurfaceJet fd_jet(double u, double v) const;

    Domain domain_;
    PositionFn position_;
    JetFn jet_;
    double fd_step_;
};

/// Chart interpolating lattice samples by local 5x5 tensor Lagrange
/// polynomials; partials are those of the interpolant. The lattice needs at
/// least 5 nodes per axis.
ParametricSurface sampled_chart(const Field2<Vec4>& points);

}  // namespace surf4
