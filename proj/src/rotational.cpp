#include "surf4/rotational.hpp"

#include <algorithm>
#include <numbers>

#include "surf4/curves.hpp"
#include "surf4/error.hpp"

namespace surf4 {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec4 GeneratingCurve::point(double v) const {
    return {a * std::cos(alpha * v), a * std::sin(alpha * v), b * std::cos(beta * v),
            b * std::sin(beta * v)};
}

Frame4 GeneratingCurve::frenet(double v) const {
    const double ca = std::cos(alpha * v), sa = std::sin(alpha * v);
    const double cb = std::cos(beta * v), sb = std::sin(beta * v);
    const double a2 = alpha * alpha, b2 = beta * beta;
    Frame4 f;
    f.x = {-a * alpha * sa, a * alpha * ca, -b * beta * sb, b * beta * cb};
    f.y = Vec4{-a * a2 * ca, -a * a2 * sa, -b * b2 * cb, -b * b2 * sb} / kappa;
    f.n1 = {b * beta * sa, -b * beta * ca, -a * alpha * sb, a * alpha * cb};
    f.n2 = Vec4{b * b2 * ca, b * b2 * sa, -a * a2 * cb, -a * a2 * sb} / kappa;
    return f;
}

GeneratingCurve make_generating_curve(double a, double b, double alpha, double beta,
                                      double unit_tol) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw Error(ErrorCode::PreconditionFailed, "rotation speeds must be positive");
    if (alpha == beta) throw Error(ErrorCode::CircleDegenerate, "alpha == beta gives a circle");
    if (std::abs(a * a * alpha * alpha + b * b * beta * beta - 1.0) > unit_tol)
        throw Error(ErrorCode::NotUnitSpeed, "a^2 alpha^2 + b^2 beta^2 must equal 1");
    GeneratingCurve c{a, b, alpha, beta, 0, 0, 0};
    const double a2 = alpha * alpha, b2 = beta * beta;
    c.kappa = std::sqrt(a * a * a2 * a2 + b * b * b2 * b2);
    c.tau = a * b * alpha * beta * (a2 - b2) / c.kappa;
    c.sigma = alpha * beta / c.kappa;
    return c;
}

MeridianProfile::MeridianProfile(Axis u, std::vector<ProfileJet> nodes, ProfileForm form)
    : axis_(u), nodes_(std::move(nodes)), form_(form) {
    if (nodes_.size() != axis_.count || axis_.count < 2)
        throw Error(ErrorCode::GridTooSmall, "profile needs at least two nodes");
}

MeridianProfile MeridianProfile::from_samples(Axis u, std::span<const double> f,
                                              std::span<const double> g, ProfileForm form) {
    const std::size_t n = f.size();
    if (n < 5 || g.size() != n || u.count != n)
        throw Error(ErrorCode::GridTooSmall, "profile samples need 5 nodes on the lattice");
    std::vector<ProfileJet> jets(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t first = std::min(i >= 2 ? i - 2 : 0, n - 5);
        std::array<double, 5> x;
        for (std::size_t k = 0; k < 5; ++k) x[k] = static_cast<double>(first + k);
        const auto w1 = fd_weights(static_cast<double>(i), x, 1);
        const auto w2 = fd_weights(static_cast<double>(i), x, 2);
        ProfileJet& j = jets[i];
        j.f = f[i];
        j.g = g[i];
        for (std::size_t k = 0; k < 5; ++k) {
            j.fp += w1[k] * f[first + k] / u.step;
            j.gp += w1[k] * g[first + k] / u.step;
            j.fpp += w2[k] * f[first + k] / (u.step * u.step);
            j.gpp += w2[k] * g[first + k] / (u.step * u.step);
        }
    }
    return MeridianProfile(u, std::move(jets), form);
}

ProfileJet MeridianProfile::at(double u) const {
    const double s = (u - axis_.start) / axis_.step;
    const auto last = static_cast<double>(axis_.count - 2);
    const auto k = static_cast<std::size_t>(std::clamp(std::floor(s), 0.0, last));
    const double t = s - static_cast<double>(k), h = axis_.step;
    // Quintic Hermite basis and its first two t-derivatives.
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const std::array<double, 6> b{1 - 10 * t3 + 15 * t4 - 6 * t5,   t - 6 * t3 + 8 * t4 - 3 * t5,
                                  0.5 * (t2 - 3 * t3 + 3 * t4 - t5), 0.5 * (t3 - 2 * t4 + t5),
                                  -4 * t3 + 7 * t4 - 3 * t5,          10 * t3 - 15 * t4 + 6 * t5};
    const std::array<double, 6> d{-30 * t2 + 60 * t3 - 30 * t4, 1 - 18 * t2 + 32 * t3 - 15 * t4,
                                  0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4),
                                  0.5 * (3 * t2 - 8 * t3 + 5 * t4), -12 * t2 + 28 * t3 - 15 * t4,
                                  30 * t2 - 60 * t3 + 30 * t4};
    const std::array<double, 6> dd{-60 * t + 180 * t2 - 120 * t3, -36 * t + 96 * t2 - 60 * t3,
                                   0.5 * (2 - 18 * t + 36 * t2 - 20 * t3),
                                   0.5 * (6 * t - 24 * t2 + 20 * t3), -24 * t + 84 * t2 - 60 * t3,
                                   60 * t - 180 * t2 + 120 * t3};
    const ProfileJet& p = nodes_[k];
    const ProfileJet& q = nodes_[k + 1];
    auto mix = [&](const std::array<double, 6>& w, double v0, double d0, double s0, double v1,
                   double d1, double s1) {
        return w[0] * v0 + w[1] * h * d0 + w[2] * h * h * s0 + w[3] * h * h * s1 +
               w[4] * h * d1 + w[5] * v1;
    };
    ProfileJet r;
    r.f = mix(b, p.f, p.fp, p.fpp, q.f, q.fp, q.fpp);
    r.fp = mix(d, p.f, p.fp, p.fpp, q.f, q.fp, q.fpp) / h;
    r.fpp = mix(dd, p.f, p.fp, p.fpp, q.f, q.fp, q.fpp) / (h * h);
    r.g = mix(b, p.g, p.gp, p.gpp, q.g, q.gp, q.gpp);
    r.gp = mix(d, p.g, p.gp, p.gpp, q.g, q.gp, q.gpp) / h;
    r.gpp = mix(dd, p.g, p.gp, p.gpp, q.g, q.gp, q.gpp) / (h * h);
    return r;
}

ProfileJet fg_from_ab(const ProfileJet& ab, const GeneratingCurve& c) {
    const double pa = c.a * c.alpha * c.alpha / c.kappa;
    const double pb = c.b * c.beta * c.beta / c.kappa;
    ProfileJet r;
    r.f = c.a - pa * ab.f + pb * ab.g;
    r.fp = -pa * ab.fp + pb * ab.gp;
    r.fpp = -pa * ab.fpp + pb * ab.gpp;
    r.g = c.b - pb * ab.f - pa * ab.g;
    r.gp = -pb * ab.fp - pa * ab.gp;
    r.gpp = -pb * ab.fpp - pa * ab.gpp;
    return r;
}

MeridianProfile MeridianProfile::to_fg(const GeneratingCurve& curve) const {
    if (form_ == ProfileForm::FG) return *this;
    std::vector<ProfileJet> jets;
    jets.reserve(nodes_.size());
    for (const auto& j : nodes_) jets.push_back(fg_from_ab(j, curve));
    MeridianProfile out(axis_, std::move(jets), ProfileForm::FG);
    out.truncated = truncated;
    out.note = note;
    return out;
}

ParametricSurface surface_from_profile(const MeridianProfile& profile, double alpha, double beta,
                                       const Tolerances& tol) {
    if (profile.form() != ProfileForm::FG)
        throw Error(ErrorCode::PreconditionFailed, "profile is in (A, B) form");
    for (const auto& j : profile.nodes()) {
        if (!(j.fp * j.fp + j.gp * j.gp > tol.tol_reg))
            throw Error(ErrorCode::IrregularProfile, "f'^2 + g'^2 vanishes");
        if (!(alpha * alpha * j.f * j.f + beta * beta * j.g * j.g > tol.tol_reg))
            throw Error(ErrorCode::IrregularProfile, "alpha^2 f^2 + beta^2 g^2 vanishes");
    }
    auto jet = [profile, alpha, beta](double u, double v) {
        const ProfileJet p = profile.at(u);
        const double ca = std::cos(alpha * v), sa = std::sin(alpha * v);
        const double cb = std::cos(beta * v), sb = std::sin(beta * v);
        SurfaceJet j;
        j.z = {p.f * ca, p.f * sa, p.g * cb, p.g * sb};
        j.zu = {p.fp * ca, p.fp * sa, p.gp * cb, p.gp * sb};
        j.zuu = {p.fpp * ca, p.fpp * sa, p.gpp * cb, p.gpp * sb};
        j.zv = {-alpha * p.f * sa, alpha * p.f * ca, -beta * p.g * sb, beta * p.g * cb};
        j.zuv = {-alpha * p.fp * sa, alpha * p.fp * ca, -beta * p.gp * sb, beta * p.gp * cb};
        j.zvv = {-alpha * alpha * p.f * ca, -alpha * alpha * p.f * sa, -beta * beta * p.g * cb,
                 -beta * beta * p.g * sb};
        return j;
    };
    auto position = [jet](double u, double v) { return jet(u, v).z; };
    const Axis& ax = profile.axis();
    return ParametricSurface(Domain{ax.start, ax.end(), 0.0, kTwoPi}, position, jet, tol.fd_step);
}

ParametricSurface surface_from_AB(const MeridianProfile& ab, const GeneratingCurve& curve,
                                  const Tolerances& tol) {
    if (ab.form() != ProfileForm::AB)
        throw Error(ErrorCode::PreconditionFailed, "profile is not in (A, B) form");
    const double k = curve.kappa, t = curve.tau, s = curve.sigma;
    for (const auto& j : ab.nodes()) {
        if (!(j.fp * j.fp + j.gp * j.gp > tol.tol_reg))
            throw Error(ErrorCode::IrregularProfile, "A'^2 + B'^2 vanishes");
        const double r = (k * j.f - 1) * (k * j.f - 1) + (t * j.f - s * j.g) * (t * j.f - s * j.g);
        if (!(r > tol.tol_reg))
            throw Error(ErrorCode::IrregularProfile, "(kappa A - 1)^2 + (tau A - sigma B)^2 vanishes");
    }
    auto jet = [ab, curve](double u, double v) {
        const ProfileJet p = ab.at(u);
        const Frame4 fr = curve.frenet(v);
        const double k = curve.kappa, t = curve.tau, s = curve.sigma;
        // Frenet equations: t' = k n, n' = -k t + tau b, b' = -tau n + sigma b1, b1' = -sigma b.
        const Vec4 n_v = -k * fr.x + t * fr.n1;
        const Vec4 b1_v = -s * fr.n1;
        const Vec4 n_vv = -(k * k + t * t) * fr.y + (t * s) * fr.n2;
        const Vec4 b1_vv = (s * t) * fr.y - (s * s) * fr.n2;
        SurfaceJet j;
        j.z = curve.point(v) + p.f * fr.y + p.g * fr.n2;
        j.zu = p.fp * fr.y + p.gp * fr.n2;
        j.zuu = p.fpp * fr.y + p.gpp * fr.n2;
        j.zv = fr.x + p.f * n_v + p.g * b1_v;
        j.zuv = p.fp * n_v + p.gp * b1_v;
        j.zvv = k * fr.y + p.f * n_vv + p.g * b1_vv;
        return j;
    };
    auto position = [jet](double u, double v) { return jet(u, v).z; };
    const Axis& ax = ab.axis();
    return ParametricSurface(Domain{ax.start, ax.end(), 0.0, kTwoPi}, position, jet, tol.fd_step);
}

double minimality_residual(const ProfileJet& p, double alpha, double beta) {
    const double a2 = alpha * alpha, b2 = beta * beta;
    return (p.gp * p.fpp - p.fp * p.gpp) / (p.fp * p.fp + p.gp * p.gp) -
           (a2 * p.f * p.gp - b2 * p.g * p.fp) / (a2 * p.f * p.f + b2 * p.g * p.g);
}

double minimality_residual_ab(const ProfileJet& p, const GeneratingCurve& c) {
    const double A = p.f, B = p.g, Ap = p.fp, Bp = p.gp;
    const double k = c.kappa, t = c.tau, s = c.sigma;
    const double lhs = (p.fpp * Bp - Ap * p.gpp) / (Ap * Ap + Bp * Bp);
    const double num = (k * A - 1) * k * Bp + (t * A - s * B) * (s * Ap + t * Bp);
    const double den = (k * A - 1) * (k * A - 1) + (t * A - s * B) * (t * A - s * B);
    return lhs - num / den;
}

MeridianProfile solve_minimal_profile(double alpha, double beta, double f0, double g0,
                                      double theta0, double length, double h_u,
                                      const Tolerances& tol) {
    const double a2 = alpha * alpha, b2 = beta * beta;
    auto radius = [&](double f, double g) { return a2 * f * f + b2 * g * g; };
    if (!(radius(f0, g0) > tol.tol_reg))
        throw Error(ErrorCode::Degenerate, "alpha^2 f0^2 + beta^2 g0^2 at or below tol_reg");
    if (!(h_u > 0.0) || !(length > 0.0))
        throw Error(ErrorCode::PreconditionFailed, "length and step must be positive");
    using State = std::array<double, 3>;  // f, g, theta
    auto rhs = [&](const State& y) {
        const double r = radius(y[0], y[1]);
        const double th = (b2 * y[1] * std::cos(y[2]) - a2 * y[0] * std::sin(y[2])) / r;
        return State{std::cos(y[2]), std::sin(y[2]), th};
    };
    auto jet_of = [&](const State& y) {
        const State d = rhs(y);
        return ProfileJet{y[0], d[0], -std::sin(y[2]) * d[2], y[1], d[1], std::cos(y[2]) * d[2]};
    };
    const auto steps = static_cast<std::size_t>(std::llround(length / h_u));
    std::vector<ProfileJet> jets{jet_of({f0, g0, theta0})};
    State y{f0, g0, theta0};
    bool truncated = false;
    for (std::size_t k = 0; k < steps; ++k) {
        auto add = [](const State& s, double c, const State& d) {
            return State{s[0] + c * d[0], s[1] + c * d[1], s[2] + c * d[2]};
        };
        const State k1 = rhs(y);
        const State m1 = add(y, 0.5 * h_u, k1);
        const State k2 = rhs(m1);
        const State m2 = add(y, 0.5 * h_u, k2);
        const State k3 = rhs(m2);
        const State e = add(y, h_u, k3);
        const State k4 = rhs(e);
        State next;
        for (std::size_t i = 0; i < 3; ++i)
            next[i] = y[i] + h_u / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        const double rmin = std::min({radius(m1[0], m1[1]), radius(m2[0], m2[1]),
                                      radius(e[0], e[1]), radius(next[0], next[1])});
        if (!(rmin > tol.tol_reg) || !std::isfinite(next[2])) {
            truncated = true;
            break;
        }
        y = next;
        jets.push_back(jet_of(y));
    }
    if (jets.size() < 2)
        throw Error(ErrorCode::Degenerate, "meridian degenerates within the first step");
    const std::size_t n = jets.size();
    MeridianProfile out(Axis{0.0, h_u, n}, std::move(jets), ProfileForm::FG);
    out.truncated = truncated;
    if (truncated)
        out.note = "alpha^2 f^2 + beta^2 g^2 reached tol_reg after " + std::to_string(n - 1) + " steps";
    return out;
}

bool CurveFamilyReport::passed(double constancy_tol, double closed_tol, double torsion_tol) const {
    bool ok = v_curvature_variation < constancy_tol && u_torsion < torsion_tol &&
              u_span_distance < closed_tol;
    if (closed_forms_checked)
        ok = ok && kappa_v_error < closed_tol && tau_v_error < closed_tol &&
             sigma_v_error < closed_tol && v_span_distance < closed_tol &&
             u_curvature_error < closed_tol;
    return ok;
}

namespace {

CurveFamilyReport curve_family(const ParametricSurface& s, std::span<const double> u0,
                               std::span<const double> v0, const Tolerances& tol,
                               bool closed_forms) {
    CurveFamilyReport rep;
    rep.closed_forms_checked = closed_forms;
    const Domain& d = s.domain();
    const double hv = 0.01 * d.v_extent() / (2.0 * std::numbers::pi) * 2.0;
    const double hu = std::min(0.02, d.u_extent() / 64.0);

    auto frame_at = [&](double u, double v) -> std::optional<CanonicalFrameData> {
        if (!closed_forms) return std::nullopt;
        CanonicalFrameData cf;
        try {
            cf = geometric_frame(s, u, v, tol, true);
        } catch (const Error& e) {
            throw Error(ErrorCode::PreconditionFailed, std::string("not minimal of general type: ") + e.what());
        }
        if (std::abs(cf.gamma1) >= 1e-5)
            throw Error(ErrorCode::PreconditionFailed, "gamma1 does not vanish");
        return cf;
    };
    auto local_x_n1 = [&](double u, double v) {
        // Osculating-plane reference span{x, n1}; for non-minimal members the
        // unit u-tangent and the normal part of z_uu play these roles.
        const FundamentalData fd = fundamental_forms(s, u, v, tol);
        const Vec4 x = fd.jet.zu / std::sqrt(fd.E);
        Vec4 w = fd.sigma(UU);
        const double n = norm(w);
        return std::pair{x, n > 0 ? w / n : Vec4{}};
    };

    for (double u : u0) {
        double kmin = 1e300, kmax = -1e300, tmin = 1e300, tmax = -1e300, smin = 1e300, smax = -1e300;
        for (double v : v0) {
            const auto dd = curve_derivatives([&](double t) { return s.position(u, t); }, v, hv);
            const FrenetData fr = frenet(dd[1], dd[2], dd[3], dd[4]);
            kmin = std::min(kmin, fr.kappa);
            kmax = std::max(kmax, fr.kappa);
            tmin = std::min(tmin, fr.tau);
            tmax = std::max(tmax, fr.tau);
            smin = std::min(smin, fr.sigma);
            smax = std::max(smax, fr.sigma);
            if (const auto cf = frame_at(u, v)) {
                const double kv = std::hypot(cf->nu, cf->gamma2);
                const double tv = std::abs(cf->mu * cf->gamma2 - cf->nu * cf->beta2) / kv;
                const double sv = -(cf->mu * cf->nu + cf->gamma2 * cf->beta2) / kv;
                rep.kappa_v_error = std::max(rep.kappa_v_error, std::abs(fr.kappa - kv));
                rep.tau_v_error = std::max(rep.tau_v_error, std::abs(fr.tau - tv));
                rep.sigma_v_error = std::max(rep.sigma_v_error, std::abs(fr.sigma - sv));
                rep.v_span_distance = std::max(
                    rep.v_span_distance,
                    plane_distance(fr.frame.y, fr.frame.n2, cf->frame.x, cf->frame.n1));
            }
        }
        rep.v_curvature_variation =
            std::max({rep.v_curvature_variation, kmax - kmin, tmax - tmin, smax - smin});
    }

    for (double v : v0)
        for (double u : u0) {
            const auto dd = curve_derivatives([&](double t) { return s.position(t, v); }, u, hu);
            const FrenetData fr = frenet(dd[1], dd[2], dd[3], dd[4]);
            rep.u_torsion = std::max(rep.u_torsion, fr.tau);
            if (const auto cf = frame_at(u, v)) {
                rep.u_curvature_error = std::max(rep.u_curvature_error, std::abs(fr.kappa - std::abs(cf->nu)));
                rep.u_span_distance = std::max(
                    rep.u_span_distance, plane_distance(fr.frame.x, fr.frame.y, cf->frame.x, cf->frame.n1));
            } else {
                const auto [x, n1] = local_x_n1(u, v);
                rep.u_span_distance =
                    std::max(rep.u_span_distance, plane_distance(fr.frame.x, fr.frame.y, x, n1));
            }
        }
    return rep;
}

}  // namespace

CurveFamilyReport verify_prop75(const ParametricSurface& s, std::span<const double> u0,
                                std::span<const double> v0, const Tolerances& tol) {
    return curve_family(s, u0, v0, tol, true);
}

CurveFamilyReport measure_curve_family(const ParametricSurface& s, std::span<const double> u0,
                                       std::span<const double> v0, const Tolerances& tol) {
    return curve_family(s, u0, v0, tol, false);
}

}  // namespace surf4
