#include "surf4/surface.hpp"

#include <algorithm>

#include "surf4/error.hpp"

namespace surf4 {

bool Domain::contains(double u, double v, double slack) const {
    const double su = slack * std::max(u_extent(), 1.0);
    const double sv = slack * std::max(v_extent(), 1.0);
    return u >= u_min - su && u <= u_max + su && v >= v_min - sv && v <= v_max + sv;
}

ParametricSurface::ParametricSurface(Domain domain, PositionFn position, JetFn jet,
                                     double fd_step)
    : domain_(domain), position_(std::move(position)), jet_(std::move(jet)), fd_step_(fd_step) {
    if (!position_) throw Error(ErrorCode::PreconditionFailed, "surface without position map");
    if (!(fd_step_ > 0.0)) throw Error(ErrorCode::PreconditionFailed, "fd_step must be positive");
}

Vec4 ParametricSurface::position(double u, double v) const {
    if (!domain_.contains(u, v)) throw Error(ErrorCode::OutOfDomain, "point outside chart");
    return position_(u, v);
}

SurfaceJet ParametricSurface::jet(double u, double v) const {
    if (!domain_.contains(u, v)) throw Error(ErrorCode::OutOfDomain, "point outside chart");
    SurfaceJet j = jet_ ? jet_(u, v) : fd_jet(u, v);
    for (const Vec4* p : {&j.z, &j.zu, &j.zv, &j.zuu, &j.zuv, &j.zvv})
        if (!p->is_finite()) throw Error(ErrorCode::FDFailure, "non-finite surface derivative");
    return j;
}

SurfaceJet ParametricSurface::fd_jet(double u, double v) const {
    // The stencil may leave the domain by one step; position_ is called
    // directly so that charts defined beyond their nominal domain still work.
    const double hu = fd_step_ * std::max(domain_.u_extent(), 1e-300);
    const double hv = fd_step_ * std::max(domain_.v_extent(), 1e-300);
    const auto& p = position_;
    SurfaceJet j;
    j.z = p(u, v);
    const Vec4 up = p(u + hu, v), um = p(u - hu, v);
    const Vec4 vp = p(u, v + hv), vm = p(u, v - hv);
    j.zu = (up - um) / (2.0 * hu);
    j.zv = (vp - vm) / (2.0 * hv);
    j.zuu = (up - 2.0 * j.z + um) / (hu * hu);
    j.zvv = (vp - 2.0 * j.z + vm) / (hv * hv);
    j.zuv = (p(u + hu, v + hv) - p(u + hu, v - hv) - p(u - hu, v + hv) + p(u - hu, v - hv)) /
            (4.0 * hu * hv);
    return j;
}

ParametricSurface ParametricSurface::without_partials(double fd_step) const {
    return ParametricSurface(domain_, position_, {}, fd_step);
}

ParametricSurface ParametricSurface::with_fd_step(double fd_step) const {
    return ParametricSurface(domain_, position_, jet_, fd_step);
}

Field2<Vec4> ParametricSurface::sample(const Grid2& grid) const {
    Field2<Vec4> out(grid);
    for (std::size_t i = 0; i < grid.u.count; ++i)
        for (std::size_t j = 0; j < grid.v.count; ++j)
            out(i, j) = position(grid.u.at(i), grid.v.at(j));
    return out;
}

namespace {

struct Window {
    std::size_t first;
    double t;  // position in node units relative to `first`
};

Window window5(const Axis& ax, double x) {
    const double s = (x - ax.start) / ax.step;
    const auto n = static_cast<long>(ax.count);
    long centre = std::lround(s);
    long first = std::clamp(centre - 2, 0L, n - 5);
    return {static_cast<std::size_t>(first), s - static_cast<double>(first)};
}

}  // namespace

ParametricSurface sampled_chart(const Field2<Vec4>& points) {
    const Grid2 g = points.grid();
    if (g.u.count < 5 || g.v.count < 5)
        throw Error(ErrorCode::GridTooSmall, "sampled chart needs 5 nodes per axis");
    auto data = std::make_shared<Field2<Vec4>>(points);
    auto jet = [data](double u, double v) {
        const Grid2& gr = data->grid();
        const Window wu = window5(gr.u, u), wv = window5(gr.v, v);
        const auto a = stencil::lagrange_weights<5>(wu.t);
        const auto b = stencil::lagrange_weights<5>(wv.t);
        const double hu = gr.u.step, hv = gr.v.step;
        SurfaceJet j;
        for (std::size_t p = 0; p < 5; ++p)
            for (std::size_t q = 0; q < 5; ++q) {
                const Vec4& z = (*data)(wu.first + p, wv.first + q);
                j.z += (a.value[p] * b.value[q]) * z;
                j.zu += (a.d1[p] * b.value[q] / hu) * z;
                j.zv += (a.value[p] * b.d1[q] / hv) * z;
                j.zuu += (a.d2[p] * b.value[q] / (hu * hu)) * z;
                j.zuv += (a.d1[p] * b.d1[q] / (hu * hv)) * z;
                j.zvv += (a.value[p] * b.d2[q] / (hv * hv)) * z;
            }
        return j;
    };
    auto position = [jet](double u, double v) { return jet(u, v).z; };
    Domain d{g.u.start, g.u.end(), g.v.start, g.v.end()};
    return ParametricSurface(d, position, jet);
}

}  // namespace surf4
