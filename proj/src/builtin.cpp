#include "surf4/builtin.hpp"

#include <cmath>
#include <numbers>

#include "surf4/error.hpp"

namespace surf4 {

namespace {

ParametricSurface from_jet(Domain d, ParametricSurface::JetFn jet) {
    auto pos = [jet](double u, double v) { return jet(u, v).z; };
    return ParametricSurface(d, pos, std::move(jet));
}

}  // namespace

ParametricSurface plane_surface(Domain d) {
    return from_jet(d, [](double u, double v) {
        SurfaceJet j;
        j.z = {u, v, 0, 0};
        j.zu = {1, 0, 0, 0};
        j.zv = {0, 1, 0, 0};
        return j;
    });
}

ParametricSurface clifford_torus(Domain d) {
    return from_jet(d, [](double u, double v) {
        const double cu = std::cos(u), su = std::sin(u), cv = std::cos(v), sv = std::sin(v);
        SurfaceJet j;
        j.z = Vec4{cu, su, cv, sv};
        j.zu = Vec4{-su, cu, 0, 0};
        j.zv = Vec4{0, 0, -sv, cv};
        j.zuu = Vec4{-cu, -su, 0, 0};
        j.zvv = Vec4{0, 0, -cv, -sv};
        return j;
    });
}

ParametricSurface catenoid(Domain d) {
    return from_jet(d, [](double u, double v) {
        const double ch = std::cosh(u), sh = std::sinh(u), cv = std::cos(v), sv = std::sin(v);
        SurfaceJet j;
        j.z = {ch * cv, ch * sv, u, 0};
        j.zu = {sh * cv, sh * sv, 1, 0};
        j.zv = {-ch * sv, ch * cv, 0, 0};
        j.zuu = {ch * cv, ch * sv, 0, 0};
        j.zuv = {-sh * sv, sh * cv, 0, 0};
        j.zvv = {-ch * cv, -ch * sv, 0, 0};
        return j;
    });
}

ParametricSurface holomorphic_square(Domain d) {
    return from_jet(d, [](double u, double v) {
        SurfaceJet j;
        j.z = {u, v, u * u - v * v, 2 * u * v};
        j.zu = {1, 0, 2 * u, 2 * v};
        j.zv = {0, 1, -2 * v, 2 * u};
        j.zuu = {0, 0, 2, 0};
        j.zuv = {0, 0, 0, 2};
        j.zvv = {0, 0, -2, 0};
        return j;
    });
}

ParametricSurface weierstrass_surface(double b, Domain d) {
    if (!(b > 0.0)) throw Error(ErrorCode::PreconditionFailed, "b must be positive");
    const double A = 1.0 / std::sqrt(1.0 + b * b);
    return from_jet(d, [A, b](double u, double v) {
        const double chu = std::cosh(u), shu = std::sinh(u), cv = std::cos(v), sv = std::sin(v);
        const double cb = std::cos(b * u), sb = std::sin(b * u);
        const double chb = std::cosh(b * v), shb = std::sinh(b * v);
        SurfaceJet j;
        j.z = Vec4{shu * cv, -shu * sv, -cb * shb / b, sb * shb / b} * A;
        j.zu = Vec4{chu * cv, -chu * sv, sb * shb, cb * shb} * A;
        j.zv = Vec4{-shu * sv, -shu * cv, -cb * chb, sb * chb} * A;
        j.zuu = Vec4{shu * cv, -shu * sv, b * cb * shb, -b * sb * shb} * A;
        j.zuv = Vec4{-chu * sv, -chu * cv, b * sb * chb, b * cb * chb} * A;
        j.zvv = Vec4{-shu * cv, shu * sv, -b * cb * shb, b * sb * shb} * A;
        return j;
    });
}

ParametricSurface closed_rotational(double k, Domain d) {
    if (!(k > 0.0) || k == 1.0)
        throw Error(ErrorCode::PreconditionFailed, "k must be positive and different from 1");
    const double A = 1.0 / std::sqrt(std::abs(k * k - 1.0));
    return from_jet(d, [A, k](double u, double v) {
        const double f = A * std::sinh(u), fp = A * std::cosh(u), fpp = f;
        const double g = A / k * std::cosh(k * u), gp = A * std::sinh(k * u),
                     gpp = A * k * std::cosh(k * u);
        const double ca = std::cos(v), sa = std::sin(v), cb = std::cos(k * v), sb = std::sin(k * v);
        SurfaceJet j;
        j.z = {f * ca, f * sa, g * cb, g * sb};
        j.zu = {fp * ca, fp * sa, gp * cb, gp * sb};
        j.zuu = {fpp * ca, fpp * sa, gpp * cb, gpp * sb};
        j.zv = {-f * sa, f * ca, -k * g * sb, k * g * cb};
        j.zuv = {-fp * sa, fp * ca, -k * gp * sb, k * gp * cb};
        j.zvv = {-f * ca, -f * sa, -k * k * g * cb, -k * k * g * sb};
        return j;
    });
}

std::vector<std::string> builtin_names() {
    return {"plane", "clifford", "catenoid", "holomorphic-square", "weierstrass", "rotational"};
}

ParametricSurface builtin_surface(const std::string& name,
                                  const std::map<std::string, double>& params) {
    Domain d;
    double shape = 0.0;
    const char* shape_key = nullptr;
    if (name == "plane") {
        d = {-1, 1, -1, 1};
    } else if (name == "clifford") {
        d = {0, 2 * std::numbers::pi, 0, 2 * std::numbers::pi};
    } else if (name == "catenoid") {
        d = {-1, 1, 0, 2 * std::numbers::pi};
    } else if (name == "holomorphic-square") {
        d = {0.5, 1.5, 0.5, 1.5};
    } else if (name == "weierstrass") {
        d = {0.2, 1.2, 0.2, 1.2};
        shape = 0.5;
        shape_key = "b";
    } else if (name == "rotational") {
        d = {0.8, 1.2, 0, 2 * std::numbers::pi};
        shape = 2.0;
        shape_key = "k";
    } else {
        throw Error(ErrorCode::ParseError, "unknown builtin surface '" + name + "'");
    }
    for (const auto& [key, value] : params) {
        if (key == "u_min") d.u_min = value;
        else if (key == "u_max") d.u_max = value;
        else if (key == "v_min") d.v_min = value;
        else if (key == "v_max") d.v_max = value;
        else if (shape_key && key == shape_key) shape = value;
        else throw Error(ErrorCode::ParseError, "parameter '" + key + "' not accepted by " + name);
    }
    if (!(d.u_max > d.u_min) || !(d.v_max > d.v_min))
        throw Error(ErrorCode::ParseError, "empty domain for " + name);
    if (name == "plane") return plane_surface(d);
    if (name == "clifford") return clifford_torus(d);
    if (name == "catenoid") return catenoid(d);
    if (name == "holomorphic-square") return holomorphic_square(d);
    if (name == "weierstrass") return weierstrass_surface(shape, d);
    return closed_rotational(shape, d);
}

}  // namespace surf4
