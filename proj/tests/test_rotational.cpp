#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "surf4/analysis.hpp"
#include "surf4/error.hpp"
#include "surf4/rotational.hpp"

using namespace surf4;

namespace {

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

/// A = 0.1 sin(2u) + 0.05, B = 0.2 u^2 - 0.1 u with exact derivatives.
MeridianProfile smooth_ab() {
    const Axis ax = Axis::spanning(0.0, 1.0, 21);
    std::vector<ProfileJet> nodes;
    for (std::size_t i = 0; i < ax.count; ++i) {
        const double u = ax.at(i);
        nodes.push_back({0.1 * std::sin(2 * u) + 0.05, 0.2 * std::cos(2 * u), -0.4 * std::sin(2 * u),
                         0.2 * u * u - 0.1 * u, 0.4 * u - 0.1, 0.4});
    }
    return MeridianProfile(ax, nodes, ProfileForm::AB);
}

/// f = u + 1, g = u + c u^2.
MeridianProfile non_minimal_profile(double c = 0.0) {
    const Axis ax = Axis::spanning(0.0, 1.0, 41);
    std::vector<double> f, g;
    for (std::size_t i = 0; i < ax.count; ++i) {
        f.push_back(ax.at(i) + 1);
        g.push_back(ax.at(i) + c * ax.at(i) * ax.at(i));
    }
    return MeridianProfile::from_samples(ax, f, g);
}

}  // namespace

TEST_CASE("generating curve: curvatures and the rejected cases") {
    const GeneratingCurve c = make_generating_curve(0.6, 0.4, 1.0, 2.0);
    // kappa^2 = 0.36 * 1 + 0.16 * 16 = 2.92.
    const double kappa = std::sqrt(2.92);
    CHECK(c.kappa == doctest::Approx(kappa).epsilon(1e-14));
    CHECK(c.tau == doctest::Approx(0.6 * 0.4 * 2.0 * (1.0 - 4.0) / kappa).epsilon(1e-14));
    CHECK(c.sigma == doctest::Approx(2.0 / kappa).epsilon(1e-14));
    CHECK(code_of([] { make_generating_curve(0.6, 0.8, 1.0, 1.0); }) == ErrorCode::CircleDegenerate);
    CHECK(code_of([] { make_generating_curve(0.6, 0.5, 1.0, 2.0); }) == ErrorCode::NotUnitSpeed);
    CHECK(code_of([] { make_generating_curve(0.6, 0.4, -1.0, 2.0); }) == ErrorCode::PreconditionFailed);
}

TEST_CASE("Frenet frame of the generating curve") {
    const GeneratingCurve c = make_generating_curve(0.6, 0.4, 1.0, 2.0);
    const double h = 1e-4;
    for (int k = 0; k < 100; ++k) {
        const double v = 0.0628 * k;
        const Frame4 f = c.frenet(v);
        CHECK(f.orthonormality_defect() < 1e-12);
        CHECK(norm((c.point(v + h) - c.point(v - h)) / (2 * h) - f.x) < 1e-7);
        const Frame4 p = c.frenet(v + h), m = c.frenet(v - h);
        const Vec4 dt = (p.x - m.x) / (2 * h), dn = (p.y - m.y) / (2 * h);
        const Vec4 db = (p.n1 - m.n1) / (2 * h), db1 = (p.n2 - m.n2) / (2 * h);
        CHECK(norm(dt - c.kappa * f.y) < 1e-6);
        CHECK(norm(dn - (-c.kappa * f.x + c.tau * f.n1)) < 1e-6);
        CHECK(norm(db - (-c.tau * f.y + c.sigma * f.n2)) < 1e-6);
        CHECK(norm(db1 - (-c.sigma * f.n1)) < 1e-6);
    }
}

TEST_CASE("quintic Hermite interpolation") {
    // Exact on a quintic when the node jets are exact.
    auto q = [](double u) { return ProfileJet{std::pow(u, 5) - u, 5 * std::pow(u, 4) - 1, 20 * std::pow(u, 3),
                                              u * u + 1, 2 * u, 2}; };
    const Axis ax = Axis::spanning(0.0, 1.0, 5);
    std::vector<ProfileJet> nodes;
    for (std::size_t i = 0; i < ax.count; ++i) nodes.push_back(q(ax.at(i)));
    const MeridianProfile p(ax, nodes);
    for (double u : {0.03, 0.31, 0.5, 0.77, 0.99}) {
        const ProfileJet a = p.at(u), b = q(u);
        CHECK(a.f == doctest::Approx(b.f).epsilon(1e-12));
        CHECK(a.fp == doctest::Approx(b.fp).epsilon(1e-12));
        CHECK(a.fpp == doctest::Approx(b.fpp).epsilon(1e-12));
        CHECK(a.g == doctest::Approx(b.g).epsilon(1e-12));
    }
    // From samples, with differenced jets.
    const Axis s = Axis::spanning(0.0, 2.0, 41);
    std::vector<double> f, g;
    for (std::size_t i = 0; i < s.count; ++i) {
        f.push_back(std::sin(s.at(i)));
        g.push_back(std::exp(s.at(i)));
    }
    const MeridianProfile m = MeridianProfile::from_samples(s, f, g);
    for (double u : {0.025, 0.7, 1.33, 1.975}) {
        const ProfileJet a = m.at(u);
        CHECK(std::abs(a.f - std::sin(u)) < 1e-7);
        CHECK(std::abs(a.fp - std::cos(u)) < 1e-5);
        CHECK(std::abs(a.fpp + std::sin(u)) < 1e-3);
        CHECK(std::abs(a.g - std::exp(u)) < 1e-6);
    }
    CHECK(code_of([] { MeridianProfile::from_samples(Axis::spanning(0, 1, 4), std::vector<double>(4, 1.0),
                                                     std::vector<double>(4, 1.0)); }) ==
          ErrorCode::GridTooSmall);
}

TEST_CASE("the (A, B) and (f, g) constructions give the same surface") {
    const GeneratingCurve c = make_generating_curve(0.6, 0.4, 1.0, 2.0);
    const MeridianProfile ab = smooth_ab();
    const ParametricSurface s1 = surface_from_AB(ab, c);
    const ParametricSurface s2 = surface_from_profile(ab.to_fg(c), c.alpha, c.beta);
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> du(0.0, 1.0), dv(0.0, 2 * std::numbers::pi);
    for (int t = 0; t < 50; ++t) {
        const double u = du(rng), v = dv(rng);
        CHECK(norm(s1.position(u, v) - s2.position(u, v)) < 1e-12);
        const SurfaceJet a = s1.jet(u, v), b = s2.jet(u, v);
        CHECK(norm(a.zu - b.zu) < 1e-10);
        CHECK(norm(a.zvv - b.zvv) < 1e-10);
        // The minimality condition written in either set of variables.
        const ProfileJet j = ab.at(u);
        CHECK(std::abs(minimality_residual_ab(j, c) - minimality_residual(fg_from_ab(j, c), c.alpha, c.beta)) <
              1e-10);
        // The chart family is orthogonal: F = 0.
        CHECK(std::abs(fundamental_forms(s2, u, v).F) < 1e-12);
    }
}

TEST_CASE("irregular profiles are rejected") {
    const Axis ax = Axis::spanning(0.0, 1.0, 5);
    const std::vector<ProfileJet> flat(5, ProfileJet{0.6, 0, 0, 0.4, 0, 0});
    CHECK(code_of([&] { surface_from_profile(MeridianProfile(ax, flat), 1.0, 2.0); }) ==
          ErrorCode::IrregularProfile);
    const std::vector<ProfileJet> through_axis(5, ProfileJet{0, 1, 0, 0, 0, 0});
    CHECK(code_of([&] { surface_from_profile(MeridianProfile(ax, through_axis), 1.0, 2.0); }) ==
          ErrorCode::IrregularProfile);
    const GeneratingCurve c = make_generating_curve(0.6, 0.4, 1.0, 2.0);
    const std::vector<ProfileJet> still(5, ProfileJet{});
    CHECK(code_of([&] { surface_from_AB(MeridianProfile(ax, still, ProfileForm::AB), c); }) ==
          ErrorCode::IrregularProfile);
}

TEST_CASE("solve_minimal_profile: minimality, unit speed, initial turning rate") {
    const MeridianProfile p = solve_minimal_profile(1.0, 2.0, 1.0, 0.3, 1.2, 1.0, 1e-3);
    CHECK(!p.truncated);
    CHECK(p.axis().end() == doctest::Approx(1.0));
    double worst = 0, speed = 0;
    for (const ProfileJet& j : p.nodes()) {
        worst = std::max(worst, std::abs(minimality_residual(j, 1.0, 2.0)));
        speed = std::max(speed, std::abs(j.fp * j.fp + j.gp * j.gp - 1));
    }
    CHECK(worst < 1e-8);
    CHECK(speed < 1e-12);

    // f0 > 0, g0 = 0, theta0 = pi/2: theta' = -1/f0, i.e. f'' = -sin(theta) theta' = 1/f0.
    const MeridianProfile q = solve_minimal_profile(1.0, 2.0, 0.8, 0.0, std::numbers::pi / 2, 0.2, 1e-3);
    CHECK(q.nodes()[0].fpp == doctest::Approx(1 / 0.8));
    CHECK(std::abs(q.nodes()[0].gpp) < 1e-15);

    // Fourth-order convergence of the integrator.
    const double f1 = solve_minimal_profile(1.0, 2.0, 1.0, 0.3, 1.2, 1.0, 0.02).nodes().back().f;
    const double f2 = solve_minimal_profile(1.0, 2.0, 1.0, 0.3, 1.2, 1.0, 0.01).nodes().back().f;
    const double f4 = solve_minimal_profile(1.0, 2.0, 1.0, 0.3, 1.2, 1.0, 0.005).nodes().back().f;
    const double ratio = (f1 - f2) / (f2 - f4);
    MESSAGE("RK4 refinement ratio " << ratio);
    CHECK(ratio > 12);
    CHECK(ratio < 20);
}

TEST_CASE("solve_minimal_profile stops where the meridian reaches the axis") {
    // Heading straight into the origin: f = 0.5 - u, g = 0.
    const MeridianProfile p = solve_minimal_profile(1.0, 2.0, 0.5, 0.0, std::numbers::pi, 1.0, 1e-3);
    CHECK(p.truncated);
    CHECK(!p.note.empty());
    CHECK(p.axis().end() < 0.5);
    CHECK(p.axis().end() > 0.49);
    CHECK(code_of([] { solve_minimal_profile(1.0, 2.0, 0.0, 0.0, 1.0, 1.0, 1e-3); }) == ErrorCode::Degenerate);
}

TEST_CASE("surfaces from minimal profiles are minimal of general type") {
    const MeridianProfile p = solve_minimal_profile(1.0, 2.0, 1.0, 0.3, 1.2, 1.0, 1e-3);
    const ParametricSurface s = surface_from_profile(p, 1.0, 2.0);
    for (double u : {0.05, 0.3, 0.6, 0.95})
        for (double v : {0.1, 1.7, 3.9, 6.0}) {
            const InvariantSet inv = invariants(s, u, v);
            CHECK(std::abs(inv.kappa * inv.kappa - inv.k) < 1e-7);
            CHECK(classify_point(inv) == PointClass::MinimalGeneralType);
        }
}

TEST_CASE("curve families of a rotational minimal surface") {
    const MeridianProfile p = solve_minimal_profile(1.0, 2.0, 1.0, 0.3, 1.2, 1.0, 1e-3);
    const ParametricSurface s = surface_from_profile(p, 1.0, 2.0);
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> du(0.1, 0.9), dv(0.5, 5.5);
    std::vector<double> u0, v0;
    for (int k = 0; k < 5; ++k) {
        u0.push_back(du(rng));
        v0.push_back(dv(rng));
    }
    const CurveFamilyReport r = verify_prop75(s, u0, v0);
    MESSAGE("v variation " << r.v_curvature_variation << " kappa " << r.kappa_v_error << " tau " << r.tau_v_error
                           << " sigma " << r.sigma_v_error << " v span " << r.v_span_distance << " u curvature "
                           << r.u_curvature_error << " u torsion " << r.u_torsion << " u span "
                           << r.u_span_distance);
    CHECK(r.closed_forms_checked);
    CHECK(r.v_curvature_variation < 1e-4);
    CHECK(r.kappa_v_error < 1e-4);
    CHECK(r.tau_v_error < 1e-4);
    CHECK(r.sigma_v_error < 1e-4);
    CHECK(r.v_span_distance < 1e-4);
    CHECK(r.u_curvature_error < 1e-4);
    CHECK(r.u_torsion < 1e-5);
    CHECK(r.u_span_distance < 1e-4);
    CHECK(r.passed());
}

TEST_CASE("a non-minimal member of the family") {
    const std::vector<double> u0{0.3, 0.5, 0.7}, v0{1.0, 2.0, 4.0};
    // A bent meridian, so that the u-curves have curvature.
    const ParametricSurface bent = surface_from_profile(non_minimal_profile(0.5), 1.0, 2.0);
    CHECK(code_of([&] { verify_prop75(bent, u0, v0); }) == ErrorCode::PreconditionFailed);
    const CurveFamilyReport r = measure_curve_family(bent, u0, v0);
    MESSAGE("v variation " << r.v_curvature_variation << " u torsion " << r.u_torsion << " u span "
                           << r.u_span_distance);
    CHECK(!r.closed_forms_checked);
    // Rotational symmetry alone keeps the v-curves' curvatures constant, and
    // every u-curve lies in the plane of its two rotation circles.
    CHECK(r.v_curvature_variation < 1e-4);
    CHECK(r.u_torsion < 1e-5);

    const ParametricSurface s = surface_from_profile(non_minimal_profile(), 1.0, 2.0);
    // Minimality is what fails, in the profile condition and in the analyser.
    const ProfileJet j = non_minimal_profile().at(0.5);
    const double res = minimality_residual(j, 1.0, 2.0);
    const InvariantSet inv = invariants(s, 0.5, 1.0);
    MESSAGE("profile residual " << res << " kappa^2 - k " << inv.kappa * inv.kappa - inv.k);
    CHECK(std::abs(res) > 1e-3);
    CHECK(inv.kappa * inv.kappa - inv.k > 1e-3);
}
