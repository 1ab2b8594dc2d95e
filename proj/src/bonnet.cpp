#include "surf4/bonnet.hpp"

#include <algorithm>

#include "surf4/error.hpp"

namespace surf4 {

Mat4 FrameSystem::A_of(const FrameCoefficients& c) {
    Mat4 a;
    a[0] = {0, c.gamma1, c.nu, 0};
    a[1] = {-c.gamma1, 0, 0, c.mu};
    a[2] = {-c.nu, 0, 0, c.beta1};
    a[3] = {0, -c.mu, -c.beta1, 0};
    return c.sqrtE * a;
}

Mat4 FrameSystem::B_of(const FrameCoefficients& c) {
    Mat4 b;
    b[0] = {0, -c.gamma2, 0, c.mu};
    b[1] = {c.gamma2, 0, -c.nu, 0};
    b[2] = {0, c.nu, 0, c.beta2};
    b[3] = {-c.mu, 0, -c.beta2, 0};
    return c.sqrtG * b;
}

ScalarField FrameSystem::E() const {
    ScalarField out(grid);
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const double s = coeff.values()[n].sqrtE;
        out.values()[n] = s * s;
    }
    return out;
}

ScalarField FrameSystem::G() const {
    ScalarField out(grid);
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const double s = coeff.values()[n].sqrtG;
        out.values()[n] = s * s;
    }
    return out;
}

FrameSystem frame_system(const InvariantField& field) {
    FrameSystem sys{field.grid, Field2<FrameCoefficients>(field.grid)};
    for (std::size_t n = 0; n < field.grid.size(); ++n) {
        const auto& d = field.nodes.values()[n];
        sys.coeff.values()[n] = {std::sqrt(field.E.values()[n]), std::sqrt(field.G.values()[n]),
                                 d.nu, d.mu, d.gamma1, d.gamma2, d.beta1, d.beta2};
    }
    return sys;
}

namespace {

// Lattice derivative along u (axis 0) or v (axis 1); fourth order when the
// line has five samples, second order otherwise.
ScalarField lattice_derivative(const ScalarField& f, int axis) {
    const Grid2& g = f.grid();
    ScalarField out(g);
    const std::size_t n_line = axis == 0 ? g.u.count : g.v.count;
    const std::size_t n_other = axis == 0 ? g.v.count : g.u.count;
    const double h = axis == 0 ? g.u.step : g.v.step;
    std::vector<double> line(n_line);
    for (std::size_t o = 0; o < n_other; ++o) {
        for (std::size_t k = 0; k < n_line; ++k) line[k] = axis == 0 ? f(k, o) : f(o, k);
        const auto d = n_line >= 5 ? stencil::derivative4(line, h) : stencil::derivative2(line, h);
        for (std::size_t k = 0; k < n_line; ++k) (axis == 0 ? out(k, o) : out(o, k)) = d[k];
    }
    return out;
}

void check_gap(const ScalarField& mu, const ScalarField& nu, double tol_gen) {
    if (mu.grid().size() != nu.grid().size())
        throw Error(ErrorCode::PreconditionFailed, "mu and nu sampled on different lattices");
    for (std::size_t n = 0; n < mu.grid().size(); ++n) {
        const double m = mu.values()[n], v = nu.values()[n];
        if (!(m > 0.0)) throw Error(ErrorCode::DegenerateInvariants, "mu must be positive");
        if (!(std::abs(v) > 0.0)) throw Error(ErrorCode::DegenerateInvariants, "nu vanishes");
        if (!(std::abs(m * m - v * v) > tol_gen))
            throw Error(ErrorCode::DegenerateInvariants, "|mu^2 - nu^2| at or below tol_gen");
    }
}

}  // namespace

FrameSystem canonical_frame_system(const ScalarField& mu, const ScalarField& nu,
                                   const Tolerances& tol) {
    const Grid2 g = mu.grid();
    if (g.u.count < 3 || g.v.count < 3)
        throw Error(ErrorCode::GridTooSmall, "reconstruction needs a 3x3 lattice");
    check_gap(mu, nu, tol.tol_gen);
    ScalarField q(g), half_l2(g), gap(g);
    for (std::size_t n = 0; n < g.size(); ++n) {
        const double m = mu.values()[n], v = nu.values()[n];
        gap.values()[n] = std::abs(m * m - v * v);
        q.values()[n] = std::sqrt(std::sqrt(gap.values()[n]));
        half_l2.values()[n] = 0.5 * std::log(std::abs((m + v) / (m - v)));
    }
    const ScalarField gap_u = lattice_derivative(gap, 0), gap_v = lattice_derivative(gap, 1);
    for (std::size_t n = 0; n < g.size(); ++n)
        if (!(std::abs(gap_u.values()[n]) > tol.tol_gen) ||
            !(std::abs(gap_v.values()[n]) > tol.tol_gen))
            throw Error(ErrorCode::DegenerateInvariants,
                        "|mu^2 - nu^2| is stationary in u or v (not strongly regular)");
    const ScalarField q_u = lattice_derivative(q, 0), q_v = lattice_derivative(q, 1);
    const ScalarField l_u = lattice_derivative(half_l2, 0), l_v = lattice_derivative(half_l2, 1);
    FrameSystem sys{g, Field2<FrameCoefficients>(g)};
    for (std::size_t n = 0; n < g.size(); ++n) {
        const double qn = q.values()[n];
        FrameCoefficients& c = sys.coeff.values()[n];
        c.sqrtE = c.sqrtG = 1.0 / qn;
        c.mu = mu.values()[n];
        c.nu = nu.values()[n];
        c.gamma1 = q_v.values()[n];
        c.gamma2 = q_u.values()[n];
        c.beta1 = -qn * l_v.values()[n];
        c.beta2 = qn * l_u.values()[n];
    }
    return sys;
}

FrameSystem gamma1_zero_frame_system(const ScalarProfile& mu, const ScalarProfile& nu,
                                     const Axis& v_axis, const Tolerances& tol) {
    const std::size_t n = mu.size();
    if (n < 3 || v_axis.count < 2)
        throw Error(ErrorCode::GridTooSmall, "reconstruction needs 3 u-samples and 2 v-samples");
    if (nu.size() != n)
        throw Error(ErrorCode::PreconditionFailed, "mu and nu sampled on different lattices");
    std::vector<double> l1(n), l2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double m = mu[i], v = nu[i];
        if (!(m > 0.0) || !(std::abs(v) > 0.0) || !(std::abs(m * m - v * v) > tol.tol_gen))
            throw Error(ErrorCode::DegenerateInvariants, "profiles violate mu > 0, nu != 0, mu^2 != nu^2");
        l1[i] = std::log(std::abs(m * m - v * v));
        l2[i] = std::log(std::abs((m + v) / (m - v)));
    }
    const auto l1p = n >= 5 ? stencil::derivative4(l1, mu.u.step) : stencil::derivative2(l1, mu.u.step);
    const auto l2p = n >= 5 ? stencil::derivative4(l2, mu.u.step) : stencil::derivative2(l2, mu.u.step);
    for (std::size_t i = 0; i < n; ++i)
        if (!(std::abs(l1p[i]) > tol.tol_gen) || !(std::abs(l2p[i]) > tol.tol_gen))
            throw Error(ErrorCode::DegenerateInvariants,
                        "|mu^2 - nu^2| or |(mu+nu)/(mu-nu)| is stationary in u");
    const Grid2 g{mu.u, v_axis};
    FrameSystem sys{g, Field2<FrameCoefficients>(g)};
    for (std::size_t i = 0; i < n; ++i) {
        FrameCoefficients c;
        c.sqrtE = 1.0;
        c.sqrtG = std::exp(-0.25 * l1[i]);
        c.mu = mu[i];
        c.nu = nu[i];
        c.gamma2 = 0.25 * l1p[i];
        c.beta2 = 0.5 * l2p[i];
        for (std::size_t j = 0; j < v_axis.count; ++j) sys.coeff(i, j) = c;
    }
    return sys;
}

namespace {

using MatField = Field2<Mat4>;

MatField matrices(const FrameSystem& sys, bool want_a) {
    MatField out(sys.grid);
    for (std::size_t n = 0; n < sys.grid.size(); ++n)
        out.values()[n] = want_a ? FrameSystem::A_of(sys.coeff.values()[n])
                                 : FrameSystem::B_of(sys.coeff.values()[n]);
    return out;
}

MatField matrix_derivative(const MatField& m, int axis) {
    MatField out(m.grid());
    ScalarField entry(m.grid());
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) {
            for (std::size_t n = 0; n < m.grid().size(); ++n) entry.values()[n] = m.values()[n][r][c];
            const ScalarField d = lattice_derivative(entry, axis);
            for (std::size_t n = 0; n < m.grid().size(); ++n) out.values()[n][r][c] = d.values()[n];
        }
    return out;
}

// RK4 for Z' = M(s) Z along one lattice line; M at half steps by cubic
// interpolation of its entries.
std::vector<Mat4> integrate_line(const Mat4& z0, const std::vector<Mat4>& m, double h) {
    const std::size_t n = m.size();
    std::vector<Mat4> z(n);
    z[0] = z0;
    std::vector<double> entry(n);
    std::vector<Mat4> mid(n > 0 ? n - 1 : 0);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) {
            for (std::size_t k = 0; k < n; ++k) entry[k] = m[k][r][c];
            for (std::size_t k = 0; k + 1 < n; ++k) mid[k][r][c] = stencil::midpoint_cubic(entry, k);
        }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const Mat4& y = z[k];
        const Mat4 k1 = m[k] * y;
        const Mat4 k2 = mid[k] * (y + (0.5 * h) * k1);
        const Mat4 k3 = mid[k] * (y + (0.5 * h) * k2);
        const Mat4 k4 = m[k + 1] * (y + h * k3);
        z[k + 1] = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return z;
}

// Integrates first along `first_axis` through node (0, 0), then along the
// other axis from every node of that line.
Field2<Mat4> sweep(const MatField& a, const MatField& b, const Mat4& z0, int first_axis) {
    const Grid2& g = a.grid();
    Field2<Mat4> z(g);
    const bool u_first = first_axis == 0;
    const MatField& m1 = u_first ? a : b;
    const MatField& m2 = u_first ? b : a;
    const std::size_t n1 = u_first ? g.u.count : g.v.count;
    const std::size_t n2 = u_first ? g.v.count : g.u.count;
    const double h1 = u_first ? g.u.step : g.v.step;
    const double h2 = u_first ? g.v.step : g.u.step;
    auto at = [&](const MatField& f, std::size_t p, std::size_t q) -> const Mat4& {
        return u_first ? f(p, q) : f(q, p);
    };
    std::vector<Mat4> line(n1);
    for (std::size_t p = 0; p < n1; ++p) line[p] = at(m1, p, 0);
    const auto base = integrate_line(z0, line, h1);
    std::vector<Mat4> col(n2);
    for (std::size_t p = 0; p < n1; ++p) {
        for (std::size_t q = 0; q < n2; ++q) col[q] = at(m2, p, q);
        const auto zs = integrate_line(base[p], col, h2);
        for (std::size_t q = 0; q < n2; ++q) (u_first ? z(p, q) : z(q, p)) = zs[q];
    }
    return z;
}

}  // namespace

double integrability_defect(const FrameSystem& sys) {
    const Grid2& g = sys.grid;
    const MatField a = matrices(sys, true), b = matrices(sys, false);
    const MatField a_v = g.v.count >= 3 ? matrix_derivative(a, 1) : MatField(g);
    const MatField b_u = g.u.count >= 3 ? matrix_derivative(b, 0) : MatField(g);
    double worst = 0.0;
    const std::size_t iu0 = g.u.count >= 3 ? 1 : 0, iv0 = g.v.count >= 3 ? 1 : 0;
    for (std::size_t i = iu0; i + iu0 < g.u.count; ++i)
        for (std::size_t j = iv0; j + iv0 < g.v.count; ++j) {
            const Mat4 d = a_v(i, j) - b_u(i, j) + a(i, j) * b(i, j) - b(i, j) * a(i, j);
            worst = std::max(worst, max_abs(d));
        }
    return worst;
}

FrameIntegration integrate_frame(const FrameSystem& sys, const Frame4& initial,
                                 const Tolerances& tol) {
    const double defect = integrability_defect(sys);
    if (!(defect < tol.admit_tol))
        throw Error(ErrorCode::CompatibilityRejected,
                    "integrability defect " + std::to_string(defect) + " reaches admit_tol");
    if (!initial.is_valid(tol.tol_ortho))
        throw Error(ErrorCode::PreconditionFailed, "initial frame is not a positive orthonormal frame");
    const Grid2& g = sys.grid;
    const MatField a = matrices(sys, true), b = matrices(sys, false);
    const Mat4 z0 = initial.matrix();
    const Field2<Mat4> z = sweep(a, b, z0, 0);

    FrameIntegration out{Field2<Frame4>(g), ScalarField(g), 0.0, 0.0, false};
    for (std::size_t n = 0; n < g.size(); ++n) {
        out.frames.values()[n] = Frame4::from_matrix(z.values()[n]);
        const double d = out.frames.values()[n].orthonormality_defect();
        out.orthonormality.values()[n] = d;
        out.max_orthonormality_defect = std::max(out.max_orthonormality_defect, d);
    }
    out.drift_exceeded = out.max_orthonormality_defect > tol.drift_tol;

    const Field2<Mat4> other = sweep(a, b, z0, 1);
    for (std::size_t pu = 0; pu < 5; ++pu)
        for (std::size_t pv = 0; pv < 5; ++pv) {
            const std::size_t i = pu * (g.u.count - 1) / 4, j = pv * (g.v.count - 1) / 4;
            out.path_defect = std::max(out.path_defect, max_abs(z(i, j) - other(i, j)));
        }
    return out;
}

PositionIntegration integrate_position(const Field2<Frame4>& frames, const ScalarField& E,
                                       const ScalarField& G, const Vec4& origin,
                                       const Tolerances& tol) {
    const Grid2& g = frames.grid();
    if (g.u.count < 2 || g.v.count < 2)
        throw Error(ErrorCode::GridTooSmall, "position integration needs a 2x2 lattice");
    const std::size_t nu = g.u.count, nv = g.v.count;
    Field2<Vec4> zu(g), zv(g);
    for (std::size_t n = 0; n < g.size(); ++n) {
        zu.values()[n] = std::sqrt(E.values()[n]) * frames.values()[n].x;
        zv.values()[n] = std::sqrt(G.values()[n]) * frames.values()[n].y;
    }
    // Simpson increments with cubic-interpolated midpoints.
    auto increments = [](const std::vector<Vec4>& f, double h) {
        std::vector<Vec4> inc(f.size() - 1);
        std::vector<double> comp(f.size());
        std::vector<std::array<double, 4>> mid(f.size() - 1);
        for (std::size_t c = 0; c < 4; ++c) {
            for (std::size_t k = 0; k < f.size(); ++k) comp[k] = f[k][c];
            for (std::size_t k = 0; k + 1 < f.size(); ++k) mid[k][c] = stencil::midpoint_cubic(comp, k);
        }
        for (std::size_t k = 0; k + 1 < f.size(); ++k) {
            const Vec4 m{mid[k][0], mid[k][1], mid[k][2], mid[k][3]};
            inc[k] = (h / 6.0) * (f[k] + 4.0 * m + f[k + 1]);
        }
        return inc;
    };
    Field2<Vec4> du(Grid2{Axis{g.u.start, g.u.step, nu - 1}, g.v});
    Field2<Vec4> dv(Grid2{g.u, Axis{g.v.start, g.v.step, nv - 1}});
    std::vector<Vec4> line;
    for (std::size_t j = 0; j < nv; ++j) {
        line.assign(nu, {});
        for (std::size_t i = 0; i < nu; ++i) line[i] = zu(i, j);
        const auto inc = increments(line, g.u.step);
        for (std::size_t i = 0; i + 1 < nu; ++i) du(i, j) = inc[i];
    }
    for (std::size_t i = 0; i < nu; ++i) {
        line.assign(nv, {});
        for (std::size_t j = 0; j < nv; ++j) line[j] = zv(i, j);
        const auto inc = increments(line, g.v.step);
        for (std::size_t j = 0; j + 1 < nv; ++j) dv(i, j) = inc[j];
    }
    PositionIntegration out{Field2<Vec4>(g), ScalarField(Grid2{
                                                 Axis{g.u.start, g.u.step, nu - 1},
                                                 Axis{g.v.start, g.v.step, nv - 1}}),
                            0.0};
    out.points(0, 0) = origin;
    for (std::size_t i = 0; i + 1 < nu; ++i) out.points(i + 1, 0) = out.points(i, 0) + du(i, 0);
    for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t j = 0; j + 1 < nv; ++j) out.points(i, j + 1) = out.points(i, j) + dv(i, j);
    for (std::size_t i = 0; i + 1 < nu; ++i)
        for (std::size_t j = 0; j + 1 < nv; ++j) {
            const double d = norm(du(i, j) + dv(i + 1, j) - dv(i, j) - du(i, j + 1));
            out.closure(i, j) = d;
            out.max_closure_defect = std::max(out.max_closure_defect, d);
        }
    if (out.max_closure_defect > tol.drift_tol)
        throw Error(ErrorCode::ClosureExceeded,
                    "cell closure defect " + std::to_string(out.max_closure_defect));
    return out;
}

namespace {

ReconstructionResult finish(const FrameSystem& sys, double compatibility, const Frame4& initial,
                            const Vec4& origin, const Tolerances& tol) {
    ReconstructionResult r;
    r.grid = sys.grid;
    r.compatibility_residual = compatibility;
    r.integrability_defect = integrability_defect(sys);
    if (!(r.integrability_defect < tol.admit_tol))
        throw Error(ErrorCode::CompatibilityRejected,
                    "integrability defect " + std::to_string(r.integrability_defect));
    FrameIntegration fi = integrate_frame(sys, initial, tol);
    r.frames = std::move(fi.frames);
    r.orthonormality_defect = fi.max_orthonormality_defect;
    r.path_defect = fi.path_defect;
    r.drift_exceeded = fi.drift_exceeded;
    r.E = sys.E();
    r.G = sys.G();
    PositionIntegration pi = integrate_position(r.frames, r.E, r.G, origin, tol);
    r.surface = std::move(pi.points);
    r.closure_defect = pi.max_closure_defect;

    r.reanalysis_general_type = true;
    if (r.grid.u.count >= 5 && r.grid.v.count >= 5) {
        const ParametricSurface chart = r.chart();
        // Skip nodes whose 5x5 chart stencil reaches the two boundary rows
        // built from one-sided lattice derivatives, when the lattice allows.
        const std::size_t mu = r.grid.u.count >= 9 ? 4 : 1, mv = r.grid.v.count >= 9 ? 4 : 1;
        for (std::size_t i = mu; i + mu < r.grid.u.count; ++i)
            for (std::size_t j = mv; j + mv < r.grid.v.count; ++j) {
                const InvariantSet inv = invariants(chart, r.grid.u.at(i), r.grid.v.at(j), tol);
                r.reanalysis_minimality = std::max(r.reanalysis_minimality, minimality_defect(inv));
                if (classify_point(inv, tol) != PointClass::MinimalGeneralType)
                    r.reanalysis_general_type = false;
            }
    } else {
        r.reanalysis_general_type = false;
    }
    return r;
}

}  // namespace

ReconstructionResult reconstruct_from_invariants(const ScalarField& mu, const ScalarField& nu,
                                                 const Frame4& initial, const Vec4& origin,
                                                 const Tolerances& tol) {
    check_gap(mu, nu, tol.tol_gen);
    const FieldResiduals res = pde_residuals_munu(mu, nu, tol);
    const double compat = res.max_abs();
    if (!(compat < tol.admit_tol))
        throw Error(ErrorCode::CompatibilityRejected,
                    "natural-equation residual " + std::to_string(compat) + " reaches admit_tol");
    return finish(canonical_frame_system(mu, nu, tol), compat, initial, origin, tol);
}

ReconstructionResult reconstruct_gamma1_zero(const ScalarProfile& mu, const ScalarProfile& nu,
                                             const Axis& v_axis, const Frame4& initial,
                                             const Vec4& origin, const Tolerances& tol) {
    const ProfileResiduals res = ode_residuals(mu, nu, tol);
    const double compat = res.max_abs();
    if (!(compat < tol.admit_tol))
        throw Error(ErrorCode::CompatibilityRejected,
                    "natural-equation residual " + std::to_string(compat) + " reaches admit_tol");
    return finish(gamma1_zero_frame_system(mu, nu, v_axis, tol), compat, initial, origin, tol);
}

}  // namespace surf4
