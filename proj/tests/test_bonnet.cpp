#include <doctest.h>

#include <cmath>
#include <numbers>

#include "procrustes.hpp"
#include "surf4/analysis.hpp"
#include "surf4/bonnet.hpp"
#include "surf4/builtin.hpp"
#include "surf4/error.hpp"
#include "surf4/rotational.hpp"

using namespace surf4;

namespace {

Grid2 lattice(const Domain& d, std::size_t nu, std::size_t nv) {
    return {Axis::spanning(d.u_min, d.u_max, nu), Axis::spanning(d.v_min, d.v_max, nv)};
}

template <class Fn>
ErrorCode code_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::IOError;
}

std::vector<Vec4> flatten(const Field2<Vec4>& f) { return {f.values().begin(), f.values().end()}; }

std::vector<Vec4> positions(const ParametricSurface& s, const Grid2& g, double v_scale = 1.0) {
    std::vector<Vec4> out;
    for (std::size_t i = 0; i < g.u.count; ++i)
        for (std::size_t j = 0; j < g.v.count; ++j) out.push_back(s.position(g.u.at(i), g.v.at(j) * v_scale));
    return out;
}

/// (mu^2, nu^2) from K and kappa: the roots of t^2 + K t + kappa^2/4, the
/// larger one first.
std::pair<double, double> squares(const InvariantSet& inv) {
    const double d = std::sqrt(std::max(inv.K * inv.K - inv.kappa * inv.kappa, 0.0));
    return {(-inv.K + d) / 2, (-inv.K - d) / 2};
}

struct ReanalysisError {
    double squares = 0, K = 0, kappa = 0, minimality = 0;
};

/// Compares invariants of the reconstruction with those of the source at
/// lattice nodes four steps inside the boundary: the chart's 5x5 stencil
/// then stays clear of the rows built from one-sided lattice derivatives.
ReanalysisError reanalyse(const ReconstructionResult& r, const ParametricSurface& source,
                          double v_scale = 1.0) {
    const ParametricSurface chart = r.chart();
    ReanalysisError e;
    for (std::size_t i = 4; i + 4 < r.grid.u.count; ++i)
        for (std::size_t j = 4; j + 4 < r.grid.v.count; ++j) {
            const double u = r.grid.u.at(i), v = r.grid.v.at(j);
            const InvariantSet a = invariants(chart, u, v);
            const InvariantSet b = invariants(source, u, v * v_scale);
            const auto [am, an] = squares(a);
            const auto [bm, bn] = squares(b);
            e.squares = std::max({e.squares, std::abs(am - bm), std::abs(an - bn)});
            e.K = std::max(e.K, std::abs(a.K - b.K));
            e.kappa = std::max(e.kappa, std::abs(a.kappa - b.kappa));
            e.minimality = std::max(e.minimality, std::abs(a.kappa * a.kappa - a.k));
        }
    return e;
}

ReconstructionResult weierstrass_round_trip(std::size_t n, const Frame4& initial = Frame4::standard(),
                                            const Vec4& origin = {}) {
    const ParametricSurface s = weierstrass_surface();
    const InvariantField f = frame_invariants_field(s, lattice(s.domain(), n, n));
    return reconstruct_from_invariants(f.mu(), f.nu(), initial, origin);
}

}  // namespace

TEST_CASE("integrability of the frame system of an analysed surface, and a perturbed one") {
    const ParametricSurface s = weierstrass_surface();
    const InvariantField f = frame_invariants_field(s, lattice(s.domain(), 101, 101));
    FrameSystem sys = frame_system(f);
    const double d = integrability_defect(sys);
    MESSAGE("integrability defect " << d);
    CHECK(d < 5e-4);

    // The canonical formulas rebuild the same coefficients from mu, nu alone.
    const FrameSystem canon = canonical_frame_system(f.mu(), f.nu());
    double worst = 0;
    for (std::size_t n = 0; n < sys.grid.size(); ++n) {
        const FrameCoefficients &a = sys.coeff.values()[n], &b = canon.coeff.values()[n];
        worst = std::max({worst, std::abs(a.sqrtE - b.sqrtE), std::abs(a.sqrtG - b.sqrtG),
                          std::abs(a.gamma1 - b.gamma1), std::abs(a.gamma2 - b.gamma2),
                          std::abs(a.beta1 - b.beta1), std::abs(a.beta2 - b.beta2)});
    }
    CHECK(worst < 1e-4);
    CHECK(integrability_defect(canon) < 5e-4);

    for (auto& c : sys.coeff.values()) c.beta2 += 0.1;
    const double bad = integrability_defect(sys);
    MESSAGE("perturbed defect " << bad);
    CHECK(bad > 0.05);
    CHECK(code_of([&] { integrate_frame(sys, Frame4::standard()); }) == ErrorCode::CompatibilityRejected);
}

TEST_CASE("frame system matrices are antisymmetric after removing the metric factors") {
    const FrameCoefficients c{1.7, 0.4, 0.3, 1.1, -0.2, 0.5, 0.8, -0.6};
    const Mat4 a = FrameSystem::A_of(c), b = FrameSystem::B_of(c);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(a[i][j] == -a[j][i]);
            CHECK(b[i][j] == -b[j][i]);
        }
    CHECK(a[0][2] == doctest::Approx(1.7 * 0.3));
    CHECK(b[0][3] == doctest::Approx(0.4 * 1.1));
}

TEST_CASE("weierstrass round trip: analyse, reconstruct, analyse") {
    const ParametricSurface s = weierstrass_surface();
    const ReconstructionResult r = weierstrass_round_trip(101);
    MESSAGE("compat " << r.compatibility_residual << " integrability " << r.integrability_defect
                      << " drift " << r.orthonormality_defect << " path " << r.path_defect << " closure "
                      << r.closure_defect << " reanalysis " << r.reanalysis_minimality);
    CHECK(r.compatibility_residual < 5e-4);
    CHECK(r.orthonormality_defect < 1e-6);
    CHECK(r.path_defect < 1e-6);
    CHECK(r.closure_defect < 1e-7);
    CHECK(!r.drift_exceeded);
    CHECK(r.reanalysis_general_type);

    const oracle::Alignment al = oracle::procrustes(flatten(r.surface), positions(s, r.grid));
    MESSAGE("procrustes max " << al.max_error);
    CHECK(al.max_error < 1e-5);
    CHECK(al.determinant == doctest::Approx(1.0));

    const ReanalysisError e = reanalyse(r, s);
    MESSAGE("squares " << e.squares << " K " << e.K << " kappa " << e.kappa << " minimality " << e.minimality);
    CHECK(e.squares < 1e-4);
    CHECK(e.K < 1e-4);
    CHECK(e.kappa < 1e-4);
}

TEST_CASE("frame drift scales with the fourth power of the step") {
    // Started from the analyser's anchor frame, the integrated frames drift
    // from the analyser's frames by the global RK4 error.
    const ParametricSurface s = weierstrass_surface();
    const Domain& d = s.domain();
    const Frame4 f0 = geometric_frame(s, d.u_min, d.v_min).frame;
    auto drift = [&](std::size_t n) {
        const ReconstructionResult r = weierstrass_round_trip(n, f0, s.position(d.u_min, d.v_min));
        double worst = 0;
        for (std::size_t i = 0; i < r.grid.u.count; ++i)
            for (std::size_t j = 0; j < r.grid.v.count; ++j) {
                const Frame4 g = geometric_frame(s, r.grid.u.at(i), r.grid.v.at(j)).frame;
                const Frame4& h = r.frames(i, j);
                worst = std::max({worst, max_abs(g.x - h.x), max_abs(g.y - h.y), max_abs(g.n1 - h.n1),
                                  max_abs(g.n2 - h.n2)});
            }
        return std::pair{worst, r.orthonormality_defect};
    };
    const auto [c, co] = drift(26);
    const auto [f, fo] = drift(51);
    MESSAGE("frame drift " << c << " -> " << f << " ratio " << c / f);
    CHECK(c / f >= 12.0);
    CHECK(c / f <= 20.0);
    // The orthonormality defect alone decays faster: RK4 keeps an
    // antisymmetric flow orthogonal up to O(h^6) per step.
    MESSAGE("orthonormality " << co << " -> " << fo << " ratio " << co / fo);
    CHECK(co / fo >= 12.0);
}

TEST_CASE("starting from the analyser's frame reproduces the surface without alignment") {
    const ParametricSurface s = weierstrass_surface();
    const Domain& d = s.domain();
    const Frame4 f0 = geometric_frame(s, d.u_min, d.v_min).frame;
    const Vec4 z0 = s.position(d.u_min, d.v_min);
    const ReconstructionResult r = weierstrass_round_trip(101, f0, z0);
    double frame_err = 0, point_err = 0;
    for (std::size_t i = 0; i < r.grid.u.count; i += 10)
        for (std::size_t j = 0; j < r.grid.v.count; j += 10) {
            const double u = r.grid.u.at(i), v = r.grid.v.at(j);
            const Frame4 g = geometric_frame(s, u, v).frame;
            const Frame4& h = r.frames(i, j);
            frame_err = std::max({frame_err, norm(g.x - h.x), norm(g.y - h.y), norm(g.n1 - h.n1), norm(g.n2 - h.n2)});
            point_err = std::max(point_err, norm(s.position(u, v) - r.surface(i, j)));
        }
    MESSAGE("frame " << frame_err << " point " << point_err);
    CHECK(frame_err < 1e-5);
    CHECK(point_err < 1e-5);

    // Moving the origin translates every node.
    const Vec4 shift{1, -2, 0.5, 3};
    const ReconstructionResult t = weierstrass_round_trip(101, f0, z0 + shift);
    double moved = 0;
    for (std::size_t n = 0; n < r.grid.size(); ++n)
        moved = std::max(moved, max_abs(t.surface.values()[n] - r.surface.values()[n] - shift));
    CHECK(moved < 1e-12);
}

TEST_CASE("gamma1 = 0 round trip on a rotational minimal surface") {
    const MeridianProfile p = solve_minimal_profile(1.0, 2.0, 1.0, 0.3, 1.2, 1.0, 1e-3);
    const ParametricSurface s = surface_from_profile(p, 1.0, 2.0);
    // u is arc length, so only v needs rescaling: G sqrt|mu^2-nu^2| = c.
    const FundamentalData fd = fundamental_forms(s, 0.5, 0.0);
    const CanonicalFrameData cf = geometric_frame(s, 0.5, 0.0);
    const double c = fd.G * std::sqrt(std::abs(cf.mu * cf.mu - cf.nu * cf.nu));
    const double vs = std::sqrt(c);

    ScalarProfile mu{Axis::spanning(0.1, 0.9, 161), {}}, nu{Axis::spanning(0.1, 0.9, 161), {}};
    for (std::size_t i = 0; i < mu.u.count; ++i) {
        const CanonicalFrameData g = geometric_frame(s, mu.u.at(i), 0.0);
        mu.values.push_back(g.mu);
        nu.values.push_back(g.nu);
    }
    const Axis v_axis = Axis::spanning(0.0, 1.5 * vs, 121);
    const ReconstructionResult r = reconstruct_gamma1_zero(mu, nu, v_axis, Frame4::standard(), {});
    MESSAGE("compat " << r.compatibility_residual << " drift " << r.orthonormality_defect << " path "
                      << r.path_defect << " closure " << r.closure_defect);
    CHECK(r.compatibility_residual < 1e-4);
    CHECK(r.orthonormality_defect < 1e-6);
    CHECK(r.path_defect < 1e-6);

    const oracle::Alignment al = oracle::procrustes(flatten(r.surface), positions(s, r.grid, 1.0 / vs));
    MESSAGE("procrustes max " << al.max_error);
    CHECK(al.max_error < 1e-5);

    const ReanalysisError e = reanalyse(r, s, 1.0 / vs);
    MESSAGE("squares " << e.squares << " K " << e.K << " kappa " << e.kappa);
    CHECK(e.squares < 1e-4);
    CHECK(e.K < 1e-4);
    CHECK(e.kappa < 1e-4);
}

TEST_CASE("invariants that fail the natural equations are rejected") {
    const ParametricSurface s = weierstrass_surface();
    const InvariantField f = frame_invariants_field(s, lattice(s.domain(), 51, 51));
    ScalarField mu = f.mu();
    const Grid2& g = mu.grid();
    for (std::size_t i = 0; i < g.u.count; ++i)
        for (std::size_t j = 0; j < g.v.count; ++j) mu(i, j) *= 1 + 0.05 * std::sin(3 * g.u.at(i)) * g.v.at(j);
    CHECK(code_of([&] { reconstruct_from_invariants(mu, f.nu(), Frame4::standard(), {}); }) ==
          ErrorCode::CompatibilityRejected);

    ScalarProfile pm{Axis::spanning(0, 1, 21), {}}, pn{Axis::spanning(0, 1, 21), {}};
    for (std::size_t i = 0; i < 21; ++i) {
        pm.values.push_back(2 + pm.u.at(i));
        pn.values.push_back(0.5);
    }
    CHECK(code_of([&] { reconstruct_gamma1_zero(pm, pn, Axis::spanning(0, 1, 5), Frame4::standard(), {}); }) ==
          ErrorCode::CompatibilityRejected);

    Frame4 flipped = Frame4::standard();
    flipped.n2 = -flipped.n2;
    CHECK(code_of([&] { integrate_frame(frame_system(f), flipped); }) == ErrorCode::PreconditionFailed);
    CHECK(code_of([&] { reconstruct_from_invariants(f.mu(), f.mu(), Frame4::standard(), {}); }) ==
          ErrorCode::DegenerateInvariants);
}
