#include "surf4/canonical.hpp"

#include <algorithm>
#include <numbers>

#include "surf4/error.hpp"

namespace surf4 {
namespace {

constexpr double kPi = std::numbers::pi;

double wrap_pi(double a) {
    a = std::remainder(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    return a;
}

// Orthonormal parametric tangents with the traceless part of sigma(x,x).
struct TangentData {
    Vec4 x, y, e1, e2;
    Vec4 sxx, sxy;
};

TangentData tangent_data(const FundamentalData& fd, const InvariantSet& inv) {
    TangentData t;
    t.x = fd.jet.zu / std::sqrt(fd.E);
    t.y = (fd.jet.zv - (fd.F / fd.E) * fd.jet.zu) * (std::sqrt(fd.E) / fd.W);
    t.e1 = fd.e1;
    t.e2 = fd.e2;
    t.sxx = 0.5 * (inv.sigma_xx - inv.sigma_yy);
    t.sxy = inv.sigma_xy;
    return t;
}

double raw_angle(const TangentData& t) {
    const double p = dot(t.sxx, t.sxy);
    const double q = 0.5 * (dot(t.sxx, t.sxx) - dot(t.sxy, t.sxy));
    return std::atan2(p, q);
}

CanonicalFrameData frame_at_angle(const TangentData& t, double phi) {
    CanonicalFrameData out;
    const double c1 = std::cos(phi), s1 = std::sin(phi);
    const double c2 = std::cos(2.0 * phi), s2 = std::sin(2.0 * phi);
    const Vec4 x = c1 * t.x + s1 * t.y;
    const Vec4 y = -s1 * t.x + c1 * t.y;
    const Vec4 sxx = c2 * t.sxx + s2 * t.sxy;
    const Vec4 sxy = c2 * t.sxy - s2 * t.sxx;
    out.mu = norm(sxy);
    if (!(out.mu > 0.0)) throw Error(ErrorCode::NotGeneralType, "sigma(x,y) vanishes");
    const Vec4 n2 = sxy / out.mu;
    // n2 = p e1 + q e2  ->  n1 = q e1 - p e2 keeps det[x y n1 n2] = +1.
    const double p = dot(n2, t.e1), q = dot(n2, t.e2);
    const Vec4 n1 = q * t.e1 - p * t.e2;
    out.frame = {x, y, n1, n2};
    out.nu = dot(sxx, n1);
    out.phi = phi;
    out.alt_nu = std::copysign(out.mu, out.nu);
    out.alt_mu = std::abs(out.nu);
    return out;
}

}  // namespace

double canonical_rotation_angle(double a, double b, double c, double d, double tol_gen) {
    const double p = a * c + b * d;
    const double q = 0.5 * (a * a + b * b - c * c - d * d);
    if (4.0 * (p * p + q * q) <= tol_gen)
        throw Error(ErrorCode::SuperConformal, "curvature ellipse is a circle");
    double four_phi = std::atan2(p, q);
    if (four_phi > kPi / 2) four_phi -= kPi;
    if (four_phi <= -kPi / 2) four_phi += kPi;
    return four_phi / 4.0;
}

CanonicalFrameData geometric_frame(const ParametricSurface& s, double u, double v,
                                   const Tolerances& tol, bool with_connection) {
    const FundamentalData fd = fundamental_forms(s, u, v, tol);
    const InvariantSet inv = invariants(fd);
    const PointClass cls = classify_point(inv, tol);
    if (cls == PointClass::MinimalSuperConformal)
        throw Error(ErrorCode::SuperConformal, "point is super-conformal");
    if (cls != PointClass::MinimalGeneralType)
        throw Error(ErrorCode::NotGeneralType, "point is not minimal of general type");

    const TangentData td = tangent_data(fd, inv);
    const double phi = canonical_rotation_angle(dot(td.sxx, td.e1), dot(td.sxx, td.e2),
                                                dot(td.sxy, td.e1), dot(td.sxy, td.e2),
                                                tol.tol_gen);
    CanonicalFrameData out = frame_at_angle(td, phi);
    out.near_superconformal = std::abs(out.mu * out.mu - out.nu * out.nu) <= tol.tol_gen;
    if (!with_connection) return out;

    // Neighbouring frames follow the branch of the centre so that the
    // canonical pair does not jump between samples.
    const double theta_c = raw_angle(td);
    auto frame_near = [&](double uu, double vv) {
        const FundamentalData f = fundamental_forms(s, uu, vv, tol);
        const TangentData t = tangent_data(f, invariants(f));
        return frame_at_angle(t, phi + wrap_pi(raw_angle(t) - theta_c) / 4.0).frame;
    };
    const Domain& dom = s.domain();
    auto derivative = [&](bool along_u) {
        const double h = s.fd_step() * (along_u ? dom.u_extent() : dom.v_extent());
        auto at = [&](double k) {
            return along_u ? frame_near(u + k * h, v) : frame_near(u, v + k * h);
        };
        auto inside = [&](double k) {
            return along_u ? dom.contains(u + k * h, v) : dom.contains(u, v + k * h);
        };
        std::array<Vec4, 4> d;
        if (inside(-1) && inside(1)) {
            const Frame4 fp = at(1), fm = at(-1);
            for (std::size_t i = 0; i < 4; ++i) d[i] = (fp[i] - fm[i]) / (2.0 * h);
        } else {
            const double dir = inside(1) ? 1.0 : -1.0;
            const Frame4 f1 = at(dir), f2 = at(2 * dir);
            for (std::size_t i = 0; i < 4; ++i)
                d[i] = dir * (-3.0 * out.frame[i] + 4.0 * f1[i] - f2[i]) / (2.0 * h);
        }
        return d;
    };
    const auto du = derivative(true), dv = derivative(false);
    // Coordinates of a tangent vector on (z_u, z_v).
    auto coords = [&](const Vec4& w) {
        const double a = dot(w, fd.jet.zu), b = dot(w, fd.jet.zv);
        const double det = fd.W * fd.W;
        return std::pair{(fd.G * a - fd.F * b) / det, (fd.E * b - fd.F * a) / det};
    };
    const auto [xu, xv] = coords(out.frame.x);
    const auto [yu, yv] = coords(out.frame.y);
    auto along_x = [&](std::size_t i) { return xu * du[i] + xv * dv[i]; };
    auto along_y = [&](std::size_t i) { return yu * du[i] + yv * dv[i]; };
    out.gamma1 = dot(along_x(0), out.frame.y);
    out.gamma2 = dot(along_y(1), out.frame.x);
    out.beta1 = dot(along_x(2), out.frame.n2);
    out.beta2 = dot(along_y(2), out.frame.n2);
    out.has_connection = true;
    return out;
}

ScalarField InvariantField::extract(double CanonicalFrameData::*member) const {
    ScalarField out(grid);
    for (std::size_t i = 0; i < grid.u.count; ++i)
        for (std::size_t j = 0; j < grid.v.count; ++j) out(i, j) = nodes(i, j).*member;
    return out;
}

ScalarField InvariantField::gap() const {
    ScalarField out(grid);
    for (std::size_t i = 0; i < grid.u.count; ++i)
        for (std::size_t j = 0; j < grid.v.count; ++j) {
            const auto& n = nodes(i, j);
            out(i, j) = std::abs(n.mu * n.mu - n.nu * n.nu);
        }
    return out;
}

namespace {

// Differentiates a field along u (axis 0) or v (axis 1) by central
// differences, one-sided second order at the lattice ends.
ScalarField differentiate(const ScalarField& f, int axis) {
    const Grid2& g = f.grid();
    ScalarField out(g);
    if (axis == 0) {
        std::vector<double> line(g.u.count);
        for (std::size_t j = 0; j < g.v.count; ++j) {
            for (std::size_t i = 0; i < g.u.count; ++i) line[i] = f(i, j);
            const auto d = stencil::derivative4(line, g.u.step);
            for (std::size_t i = 0; i < g.u.count; ++i) out(i, j) = d[i];
        }
    } else {
        std::vector<double> line(g.v.count);
        for (std::size_t i = 0; i < g.u.count; ++i) {
            for (std::size_t j = 0; j < g.v.count; ++j) line[j] = f(i, j);
            const auto d = stencil::derivative4(line, g.v.step);
            for (std::size_t j = 0; j < g.v.count; ++j) out(i, j) = d[j];
        }
    }
    return out;
}

void check_jumps(const ScalarField& f, double jump_tol, const char* name) {
    // A swap of the (mu, nu) branch shows up as a spike against the mean of
    // the two neighbours; smooth variation only leaves an O(h^2) remainder.
    const Grid2& g = f.grid();
    const double scale = max_abs_finite(f.values());
    if (scale == 0.0) return;
    for (std::size_t i = 0; i < g.u.count; ++i)
        for (std::size_t j = 0; j < g.v.count; ++j) {
            const bool bad_u = i > 0 && i + 1 < g.u.count &&
                               std::abs(f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) > 2.0 * jump_tol * scale;
            const bool bad_v = j > 0 && j + 1 < g.v.count &&
                               std::abs(f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) > 2.0 * jump_tol * scale;
            if (bad_u || bad_v)
                throw Error(ErrorCode::BranchBreak, std::string(name) + " jumps between neighbours");
        }
}

}  // namespace

InvariantField frame_invariants_field(const ParametricSurface& s, const Grid2& grid,
                                      const Tolerances& tol) {
    if (grid.u.count < 3 || grid.v.count < 3)
        throw Error(ErrorCode::GridTooSmall, "invariant field needs a 3x3 lattice");
    InvariantField field{grid, Field2<CanonicalFrameData>(grid), ScalarField(grid),
                         ScalarField(grid), ScalarField(grid), ScalarField(grid)};
    for (std::size_t i = 0; i < grid.u.count; ++i)
        for (std::size_t j = 0; j < grid.v.count; ++j) {
            const FundamentalData fd = fundamental_forms(s, grid.u.at(i), grid.v.at(j), tol);
            const InvariantSet inv = invariants(fd);
            if (std::abs(fd.F) > tol.tol_ortho * std::sqrt(fd.E * fd.G))
                throw Error(ErrorCode::NotSemiCanonical, "parametric lines are not orthogonal");
            const TangentData td = tangent_data(fd, inv);
            const double cross = std::abs(dot(td.sxx, td.sxy));
            if (cross > tol.tol_canon * (norm(td.sxx) * norm(td.sxy) + 1.0))
                throw Error(ErrorCode::NotSemiCanonical, "parametric tangents are not canonical");
            CanonicalFrameData node = frame_at_angle(td, 0.0);
            if (std::abs(node.nu) <= tol.tol_gen)
                throw Error(ErrorCode::NotGeneralType, "nu vanishes");
            node.near_superconformal = std::abs(node.mu * node.mu - node.nu * node.nu) <= tol.tol_gen;
            // gamma1 = -(ln sqrt E)_v / sqrt G, gamma2 = -(ln sqrt G)_u / sqrt E.
            const double Ev = 2.0 * dot(fd.jet.zu, fd.jet.zuv);
            const double Gu = 2.0 * dot(fd.jet.zv, fd.jet.zuv);
            node.gamma1 = -Ev / (2.0 * fd.E * std::sqrt(fd.G));
            node.gamma2 = -Gu / (2.0 * fd.G * std::sqrt(fd.E));
            field.nodes(i, j) = node;
            field.E(i, j) = fd.E;
            field.F(i, j) = fd.F;
            field.G(i, j) = fd.G;
        }

    const ScalarField mu = field.mu(), nu = field.nu();
    ScalarField mu2(grid), nu2(grid);
    for (std::size_t n = 0; n < grid.size(); ++n) {
        mu2.values()[n] = mu.values()[n] * mu.values()[n];
        nu2.values()[n] = nu.values()[n] * nu.values()[n];
    }
    check_jumps(mu2, tol.jump_tol, "mu^2");
    check_jumps(nu2, tol.jump_tol, "nu^2");
    // mu passing through 0 flips n2 under the mu > 0 convention, and nu
    // jumps to its negative while nu^2 stays smooth.
    check_jumps(nu, tol.jump_tol, "nu");

    const ScalarField mu_u = differentiate(mu, 0), mu_v = differentiate(mu, 1);
    const ScalarField nu_u = differentiate(nu, 0), nu_v = differentiate(nu, 1);
    for (std::size_t i = 0; i < grid.u.count; ++i)
        for (std::size_t j = 0; j < grid.v.count; ++j) {
            CanonicalFrameData& n = field.nodes(i, j);
            const double sE = std::sqrt(field.E(i, j)), sG = std::sqrt(field.G(i, j));
            const double s2 = n.nu * n.nu + n.mu * n.mu;
            // beta2 enters the u-relations, beta1 the v-relations.
            const double r1 = mu_u(i, j) / sE - 2.0 * n.mu * n.gamma2;
            const double r4 = nu_u(i, j) / sE - 2.0 * n.nu * n.gamma2;
            const double r2 = mu_v(i, j) / sG - 2.0 * n.mu * n.gamma1;
            const double r3 = nu_v(i, j) / sG - 2.0 * n.nu * n.gamma1;
            n.beta2 = (n.nu * r1 + n.mu * r4) / s2;
            n.beta1 = -(n.nu * r2 + n.mu * r3) / s2;
            const double e1 = n.nu * n.beta2 - r1, e4 = n.mu * n.beta2 - r4;
            const double e2 = -n.nu * n.beta1 - r2, e3 = -n.mu * n.beta1 - r3;
            field.beta_fit_residual(i, j) = std::sqrt(e1 * e1 + e2 * e2 + e3 * e3 + e4 * e4);
        }
    return field;
}

std::array<ScalarField, 6> codazzi_residuals(const InvariantField& field) {
    const Grid2 g = field.grid;
    const Grid2 in = g.interior();
    const ScalarField mu = field.mu(), nu = field.nu();
    const ScalarField b1 = field.extract(&CanonicalFrameData::beta1);
    const ScalarField b2 = field.extract(&CanonicalFrameData::beta2);
    const ScalarField g1 = field.extract(&CanonicalFrameData::gamma1);
    const ScalarField g2 = field.extract(&CanonicalFrameData::gamma2);
    // Same fourth-order differences as the beta fit, so the residual
    // carries no h^2 term of its own.
    const ScalarField mu_u = differentiate(mu, 0), mu_v = differentiate(mu, 1);
    const ScalarField nu_u = differentiate(nu, 0), nu_v = differentiate(nu, 1);
    const ScalarField b2_u = differentiate(b2, 0), b1_v = differentiate(b1, 1);
    const ScalarField g2_u = differentiate(g2, 0), g1_v = differentiate(g1, 1);
    std::array<ScalarField, 6> r;
    for (auto& f : r) f = ScalarField(in);
    for (std::size_t i = 1; i + 1 < g.u.count; ++i)
        for (std::size_t j = 1; j + 1 < g.v.count; ++j) {
            const auto& n = field.nodes(i, j);
            const double sE = std::sqrt(field.E(i, j)), sG = std::sqrt(field.G(i, j));
            const std::size_t a = i - 1, b = j - 1;
            r[0](a, b) = 2 * n.mu * n.gamma2 + n.nu * n.beta2 - mu_u(i, j) / sE;
            r[1](a, b) = 2 * n.mu * n.gamma1 - n.nu * n.beta1 - mu_v(i, j) / sG;
            r[2](a, b) = 2 * n.nu * n.gamma1 - n.mu * n.beta1 - nu_v(i, j) / sG;
            r[3](a, b) = 2 * n.nu * n.gamma2 + n.mu * n.beta2 - nu_u(i, j) / sE;
            r[4](a, b) = n.gamma2 * n.beta2 - n.gamma1 * n.beta1 - 2 * n.nu * n.mu -
                         (b2_u(i, j) / sE - b1_v(i, j) / sG);
            r[5](a, b) = n.gamma1 * n.gamma1 + n.gamma2 * n.gamma2 - (n.nu * n.nu + n.mu * n.mu) -
                         (g2_u(i, j) / sE + g1_v(i, j) / sG);
        }
    return r;
}

ScalarField normal_connection_residual(const InvariantField& field) {
    const Grid2 g = field.grid;
    const ScalarField b1 = field.extract(&CanonicalFrameData::beta1);
    const ScalarField b2 = field.extract(&CanonicalFrameData::beta2);
    const ScalarField b2_u = differentiate(b2, 0), b1_v = differentiate(b1, 1);
    ScalarField r(g.interior());
    for (std::size_t i = 1; i + 1 < g.u.count; ++i)
        for (std::size_t j = 1; j + 1 < g.v.count; ++j) {
            const auto& n = field.nodes(i, j);
            const double xb2 = b2_u(i, j) / std::sqrt(field.E(i, j));
            const double yb1 = b1_v(i, j) / std::sqrt(field.G(i, j));
            const double kappa = 2 * n.nu * n.mu;
            r(i - 1, j - 1) = kappa + xb2 - yb1 + n.gamma1 * n.beta1 - n.gamma2 * n.beta2;
        }
    return r;
}

CanonicalReport check_canonical_parameters(const InvariantField& field,
                                           std::optional<CanonicalVariant> variant,
                                           const Tolerances& tol) {
    double strong = 0.0, zero = 0.0;
    for (std::size_t n = 0; n < field.grid.size(); ++n) {
        const auto& d = field.nodes.values()[n];
        const double root = std::sqrt(std::abs(d.mu * d.mu - d.nu * d.nu));
        const double e = field.E.values()[n], g = field.G.values()[n];
        const double g_defect = std::abs(g * root - 1.0);
        strong = std::max({strong, std::abs(e * root - 1.0), g_defect});
        zero = std::max({zero, std::abs(e - 1.0), g_defect});
    }
    CanonicalReport rep;
    rep.variant = variant ? *variant
                          : (zero < strong ? CanonicalVariant::Gamma1Zero
                                           : CanonicalVariant::StronglyRegular);
    rep.max_defect = rep.variant == CanonicalVariant::Gamma1Zero ? zero : strong;
    rep.is_canonical = rep.max_defect < tol.reparam_tol;
    return rep;
}

ArcReparam::ArcReparam(Axis axis, std::vector<double> phi) : axis_(axis), phi_(std::move(phi)) {
    if (phi_.size() != axis_.count || axis_.count < 2)
        throw Error(ErrorCode::GridTooSmall, "reparametrisation needs two samples");
    for (double p : phi_)
        if (!(p > 0.0)) throw Error(ErrorCode::DomainError, "metric factor must be positive");
    cumulative_.assign(axis_.count, axis_.start);
    for (std::size_t k = 0; k + 1 < axis_.count; ++k)
        cumulative_[k + 1] = cumulative_[k] + integrate_cell(k, axis_.at(k + 1));
}

namespace {

// Local cubic through four samples around cell `k`; returns value and slope.
std::pair<double, double> cubic_eval(const Axis& ax, const std::vector<double>& f, double x) {
    const std::size_t n = f.size();
    if (n < 4) {
        const double s = (x - ax.start) / ax.step;
        const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max(s, 0.0)), n - 2);
        const double t = s - static_cast<double>(k);
        return {f[k] + t * (f[k + 1] - f[k]), (f[k + 1] - f[k]) / ax.step};
    }
    const double s = (x - ax.start) / ax.step;
    const long k = std::clamp(static_cast<long>(std::floor(s)), 0L, static_cast<long>(n) - 2);
    const long first = std::clamp(k - 1, 0L, static_cast<long>(n) - 4);
    const auto w = stencil::lagrange_weights<4>(s - static_cast<double>(first));
    double v = 0.0, d = 0.0;
    for (std::size_t m = 0; m < 4; ++m) {
        v += w.value[m] * f[static_cast<std::size_t>(first) + m];
        d += w.d1[m] * f[static_cast<std::size_t>(first) + m];
    }
    return {v, d / ax.step};
}

}  // namespace

double ArcReparam::phi(double x) const { return cubic_eval(axis_, phi_, x).first; }
double ArcReparam::phi_derivative(double x) const { return cubic_eval(axis_, phi_, x).second; }

double ArcReparam::integrate_cell(std::size_t cell, double to) const {
    // Five-point Gauss-Legendre on [x_cell, to].
    static constexpr std::array<double, 5> nodes{-0.9061798459386640, -0.5384693101056831, 0.0,
                                                 0.5384693101056831, 0.9061798459386640};
    static constexpr std::array<double, 5> weights{0.2369268850561891, 0.4786286704993665,
                                                   0.5688888888888889, 0.4786286704993665,
                                                   0.2369268850561891};
    const double a = axis_.at(cell);
    const double half = 0.5 * (to - a), mid = 0.5 * (to + a);
    double sum = 0.0;
    for (std::size_t q = 0; q < 5; ++q) sum += weights[q] * std::sqrt(phi(mid + half * nodes[q]));
    return half * sum;
}

double ArcReparam::forward(double x) const {
    const double s = (x - axis_.start) / axis_.step;
    const std::size_t k = std::min<std::size_t>(
        static_cast<std::size_t>(std::clamp(std::floor(s), 0.0, static_cast<double>(axis_.count - 2))),
        axis_.count - 2);
    return cumulative_[k] + integrate_cell(k, x);
}

double ArcReparam::inverse(double target) const {
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    std::size_t k = it == cumulative_.begin() ? 0 : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
    k = std::min(k, axis_.count - 2);
    double lo = axis_.at(k), hi = axis_.at(k + 1);
    const double span = cumulative_[k + 1] - cumulative_[k];
    double x = lo + (target - cumulative_[k]) / span * (hi - lo);
    if (target < cumulative_.front() || target > cumulative_.back()) {
        // Slight extrapolation for stencils reaching past the end.
        for (int iter = 0; iter < 50; ++iter) {
            const double dx = (forward(x) - target) / std::sqrt(phi(x));
            x -= dx;
            if (std::abs(dx) < 1e-15 * (1.0 + std::abs(x))) break;
        }
        return x;
    }
    for (int iter = 0; iter < 60; ++iter) {
        const double f = forward(x) - target;
        if (f > 0) hi = x; else lo = x;
        double next = x - f / std::sqrt(phi(x));
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) < 1e-15 * (1.0 + std::abs(x))) return next;
        x = next;
    }
    return x;
}

ParametricSurface to_canonical_parameters(const ParametricSurface& s, const InvariantField& field,
                                          CanonicalVariant variant, const Tolerances& tol) {
    const Grid2& g = field.grid;
    const ScalarField gap = field.gap();
    std::vector<double> phi(g.u.count, 0.0), psi(g.v.count, 0.0);
    ScalarField phi_f(g), psi_f(g);
    for (std::size_t i = 0; i < g.u.count; ++i)
        for (std::size_t j = 0; j < g.v.count; ++j) {
            const double root = std::sqrt(gap(i, j));
            phi_f(i, j) = variant == CanonicalVariant::Gamma1Zero ? field.E(i, j) : field.E(i, j) * root;
            psi_f(i, j) = field.G(i, j) * root;
            phi[i] += phi_f(i, j) / static_cast<double>(g.v.count);
            psi[j] += psi_f(i, j) / static_cast<double>(g.u.count);
        }
    const double phi_scale = *std::max_element(phi.begin(), phi.end());
    const double psi_scale = *std::max_element(psi.begin(), psi.end());
    for (std::size_t i = 0; i < g.u.count; ++i)
        for (std::size_t j = 0; j < g.v.count; ++j) {
            if (std::abs(phi_f(i, j) - phi[i]) > tol.lemma_tol * phi_scale)
                throw Error(ErrorCode::LemmaViolated, "E-factor depends on v");
            if (std::abs(psi_f(i, j) - psi[j]) > tol.lemma_tol * psi_scale)
                throw Error(ErrorCode::LemmaViolated, "G-factor depends on u");
        }
    auto ru = std::make_shared<ArcReparam>(g.u, phi);
    auto rv = std::make_shared<ArcReparam>(g.v, psi);
    const ParametricSurface base = s;
    auto jet = [base, ru, rv](double a, double b) {
        const double u = ru->inverse(a), v = rv->inverse(b);
        const double pu = ru->phi(u), pv = rv->phi(v);
        const double U1 = 1.0 / std::sqrt(pu), V1 = 1.0 / std::sqrt(pv);
        const double U2 = -ru->phi_derivative(u) / (2.0 * pu * pu);
        const double V2 = -rv->phi_derivative(v) / (2.0 * pv * pv);
        const SurfaceJet j = base.jet(u, v);
        SurfaceJet r;
        r.z = j.z;
        r.zu = U1 * j.zu;
        r.zv = V1 * j.zv;
        r.zuu = (U1 * U1) * j.zuu + U2 * j.zu;
        r.zuv = (U1 * V1) * j.zuv;
        r.zvv = (V1 * V1) * j.zvv + V2 * j.zv;
        return r;
    };
    auto position = [base, ru, rv](double a, double b) {
        return base.position(ru->inverse(a), rv->inverse(b));
    };
    const Domain d{ru->s_min(), ru->s_max(), rv->s_min(), rv->s_max()};
    return ParametricSurface(d, position, jet, s.fd_step());
}

GeodesicTrace geodesic_trace(const ParametricSurface& s, double u0, double v0,
                             const Vec4& direction, double length, const Tolerances& tol,
                             double step) {
    const FundamentalData f0 = fundamental_forms(s, u0, v0, tol);
    const double a = dot(direction, f0.jet.zu), b = dot(direction, f0.jet.zv);
    const double w2 = f0.W * f0.W;
    double du = (f0.G * a - f0.F * b) / w2, dv = (f0.E * b - f0.F * a) / w2;
    const Vec4 tangent = du * f0.jet.zu + dv * f0.jet.zv;
    if (norm(tangent - direction) > 1e-8 || std::abs(norm(direction) - 1.0) > 1e-8)
        throw Error(ErrorCode::PreconditionFailed, "direction is not a unit tangent vector");

    if (!(step > 0.0)) step = 1e-3 * s.domain().diameter();
    const std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / step)));
    const double h = length / static_cast<double>(n);

    using State = std::array<double, 4>;  // u, v, u', v'
    struct Eval {
        State rate;
        FundamentalData fd;
    };
    auto eval = [&](const State& y) {
        if (!s.domain().contains(y[0], y[1]))
            throw Error(ErrorCode::LeftDomain, "geodesic left the chart");
        Eval e{{}, fundamental_forms(s, y[0], y[1], tol)};
        auto accel = [&](std::size_t k) {
            return -(e.fd.gamma(k, UU) * y[2] * y[2] + 2.0 * e.fd.gamma(k, UV) * y[2] * y[3] +
                     e.fd.gamma(k, VV) * y[3] * y[3]);
        };
        e.rate = {y[2], y[3], accel(1), accel(2)};
        return e;
    };
    auto record = [&](double arc, const State& y, const Eval& e) {
        GeodesicSample smp;
        smp.s = arc;
        smp.u = y[0];
        smp.v = y[1];
        smp.du = y[2];
        smp.dv = y[3];
        const SurfaceJet& j = e.fd.jet;
        smp.point = j.z;
        smp.t = y[2] * j.zu + y[3] * j.zv;
        smp.tprime = e.rate[2] * j.zu + e.rate[3] * j.zv + (y[2] * y[2]) * j.zuu +
                     (2.0 * y[2] * y[3]) * j.zuv + (y[3] * y[3]) * j.zvv;
        return smp;
    };
    auto axpy = [](const State& y, double c, const State& k) {
        State r;
        for (std::size_t i = 0; i < 4; ++i) r[i] = y[i] + c * k[i];
        return r;
    };

    GeodesicTrace trace;
    trace.step = h;
    State y{u0, v0, du, dv};
    Eval e = eval(y);
    trace.samples.push_back(record(0.0, y, e));
    for (std::size_t it = 0; it < n; ++it) {
        const State k1 = e.rate;
        const State k2 = eval(axpy(y, 0.5 * h, k1)).rate;
        const State k3 = eval(axpy(y, 0.5 * h, k2)).rate;
        const State k4 = eval(axpy(y, h, k3)).rate;
        for (std::size_t i = 0; i < 4; ++i) y[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        e = eval(y);
        trace.samples.push_back(record(static_cast<double>(it + 1) * h, y, e));
    }
    return trace;
}

}  // namespace surf4
