#include "surf4/analysis.hpp"

#include <algorithm>

#include "surf4/error.hpp"

namespace surf4 {

std::string_view to_string(PointClass c) {
    switch (c) {
        case PointClass::Flat: return "Flat";
        case PointClass::MinimalSuperConformal: return "MinimalSuperConformal";
        case PointClass::MinimalGeneralType: return "MinimalGeneralType";
        case PointClass::NonMinimal: return "NonMinimal";
    }
    return "Unknown";
}

namespace {

// Seed pairs tried in order when completing the tangent plane to a frame.
constexpr std::array<std::array<std::size_t, 2>, 6> kSeedPairs{{
    {2, 3}, {0, 3}, {1, 2}, {0, 2}, {1, 3}, {0, 1}}};

Vec4 basis(std::size_t i) {
    Vec4 e;
    e[i] = 1.0;
    return e;
}

// Orthonormal normal pair for the tangent plane spanned by the first two
// entries of `tangent`. Picks the first seed pair whose pivots are not small,
// or the best conditioned pair if none qualifies.
std::pair<Vec4, Vec4> normal_pair(const Vec4& x, const Vec4& y, double tol_rank) {
    constexpr double kGoodPivot = 0.25;
    double best = -1.0;
    std::pair<Vec4, Vec4> best_pair;
    for (const auto& seeds : kSeedPairs) {
        Vec4 w1 = basis(seeds[0]);
        for (int pass = 0; pass < 2; ++pass) w1 -= dot(w1, x) * x + dot(w1, y) * y;
        const double p1 = norm(w1);
        if (p1 <= tol_rank) continue;
        const Vec4 n1 = w1 / p1;
        Vec4 w2 = basis(seeds[1]);
        for (int pass = 0; pass < 2; ++pass)
            w2 -= dot(w2, x) * x + dot(w2, y) * y + dot(w2, n1) * n1;
        const double p2 = norm(w2);
        if (p2 <= tol_rank) continue;
        const double pivot = std::min(p1, p2);
        if (pivot > best) {
            best = pivot;
            best_pair = {n1, w2 / p2};
        }
        if (pivot >= kGoodPivot) break;
    }
    if (best < 0.0) throw Error(ErrorCode::RankDeficient, "no normal frame seed is usable");
    return best_pair;
}

}  // namespace

FundamentalData fundamental_forms(const ParametricSurface& s, double u, double v,
                                  const Tolerances& tol) {
    FundamentalData fd;
    fd.jet = s.jet(u, v);
    const SurfaceJet& j = fd.jet;
    fd.E = dot(j.zu, j.zu);
    fd.F = dot(j.zu, j.zv);
    fd.G = dot(j.zv, j.zv);
    const double w2 = fd.E * fd.G - fd.F * fd.F;
    if (!(fd.E > 0.0) || !(fd.G > 0.0) || !(w2 > 0.0) || std::sqrt(w2) <= tol.tol_reg)
        throw Error(ErrorCode::Degenerate, "chart is not regular at this point");
    fd.W = std::sqrt(w2);

    const Vec4 tangent[2] = {j.zu, j.zv};
    const auto xy = gram_schmidt(tangent, tol.tol_rank);
    auto [e1, e2] = normal_pair(xy[0], xy[1], tol.tol_rank);
    if (det4(Mat4::from_rows(xy[0], xy[1], e1, e2)) < 0.0) e2 = -e2;
    fd.e1 = e1;
    fd.e2 = e2;

    // Columns z_u, z_v, e1, e2.
    const Mat4 basis_cols = Mat4::from_rows(j.zu, j.zv, e1, e2).transposed();
    const Vec4* second[3] = {&j.zuu, &j.zuv, &j.zvv};
    for (std::size_t p = 0; p < 3; ++p) {
        const Vec4 sol = solve4(basis_cols, *second[p], tol.tol_rank);
        fd.christoffel[0][p] = sol[0];
        fd.christoffel[1][p] = sol[1];
        fd.c[0][p] = sol[2];
        fd.c[1][p] = sol[3];
        const Vec4 back = sol[0] * j.zu + sol[1] * j.zv + sol[2] * e1 + sol[3] * e2;
        fd.decomposition_residual = std::max(
            fd.decomposition_residual, norm(back - *second[p]) / (norm(*second[p]) + 1.0));
    }
    if (!(fd.decomposition_residual < tol.tol_decomp))
        throw Error(ErrorCode::FDFailure, "second-partial decomposition did not close");
    return fd;
}

FundamentalData rotate_normal_frame(const FundamentalData& fd, double theta) {
    FundamentalData r = fd;
    const double cs = std::cos(theta), sn = std::sin(theta);
    r.e1 = cs * fd.e1 + sn * fd.e2;
    r.e2 = -sn * fd.e1 + cs * fd.e2;
    const Vec4* second[3] = {&fd.jet.zuu, &fd.jet.zuv, &fd.jet.zvv};
    for (std::size_t p = 0; p < 3; ++p) {
        r.c[0][p] = dot(*second[p], r.e1);
        r.c[1][p] = dot(*second[p], r.e2);
    }
    return r;
}

LMN lmn_coefficients(const FundamentalData& fd) {
    const auto& c = fd.c;
    const double d1 = det2(c[0][UU], c[0][UV], c[1][UU], c[1][UV]);
    const double d2 = det2(c[0][UU], c[0][VV], c[1][UU], c[1][VV]);
    const double d3 = det2(c[0][UV], c[0][VV], c[1][UV], c[1][VV]);
    return {2.0 * d1 / fd.W, d2 / fd.W, 2.0 * d3 / fd.W};
}

std::pair<double, double> ellipse_axes(const Vec4& p, const Vec4& q) {
    const double pp = dot(p, p), qq = dot(q, q), pq = dot(p, q);
    const double mean = 0.5 * (pp + qq);
    const double rad = std::hypot(0.5 * (pp - qq), pq);
    return {std::sqrt(mean + rad), std::sqrt(std::max(mean - rad, 0.0))};
}

InvariantSet invariants(const FundamentalData& fd) {
    InvariantSet inv;
    const auto [L, M, N] = lmn_coefficients(fd);
    inv.L = L;
    inv.M = M;
    inv.N = N;
    const double w2 = fd.W * fd.W;
    inv.k = (L * N - M * M) / w2;
    inv.kappa = (fd.E * N + fd.G * L - 2.0 * fd.F * M) / (2.0 * w2);

    const Vec4 s11 = fd.sigma(UU), s12 = fd.sigma(UV), s22 = fd.sigma(VV);
    const double r = fd.F / fd.E;
    inv.sigma_xx = s11 / fd.E;
    inv.sigma_xy = (s12 - r * s11) / fd.W;
    inv.sigma_yy = (fd.E / w2) * (s22 - 2.0 * r * s12 + r * r * s11);
    inv.K = dot(inv.sigma_xx, inv.sigma_yy) - dot(inv.sigma_xy, inv.sigma_xy);
    inv.H = 0.5 * (inv.sigma_xx + inv.sigma_yy);
    inv.ellipse_center = inv.H;
    inv.ellipse_semiaxes = ellipse_axes(0.5 * (inv.sigma_xx - inv.sigma_yy), inv.sigma_xy);
    return inv;
}

InvariantSet invariants(const ParametricSurface& s, double u, double v, const Tolerances& tol) {
    return invariants(fundamental_forms(s, u, v, tol));
}

std::pair<double, double> ellipse_axes(const InvariantSet& inv) { return inv.ellipse_semiaxes; }

double minimality_defect(const InvariantSet& inv) {
    const double scale = (std::abs(inv.K) + 1.0) * (std::abs(inv.K) + 1.0);
    return std::abs(inv.kappa * inv.kappa - inv.k) / scale;
}

double superconformal_defect(const InvariantSet& inv) {
    const double scale = (std::abs(inv.K) + 1.0) * (std::abs(inv.K) + 1.0);
    return std::abs(inv.K * inv.K - inv.kappa * inv.kappa) / scale;
}

PointClass classify_point(const InvariantSet& inv, const Tolerances& tol) {
    if (std::max({std::abs(inv.L), std::abs(inv.M), std::abs(inv.N)}) < tol.tol_flat)
        return PointClass::Flat;
    if (minimality_defect(inv) < tol.tol_min) {
        if (superconformal_defect(inv) < tol.tol_sc) return PointClass::MinimalSuperConformal;
        return PointClass::MinimalGeneralType;
    }
    return PointClass::NonMinimal;
}

AnalysisSweep analyze_grid(const ParametricSurface& s, const Grid2& grid, const Tolerances& tol) {
    AnalysisSweep out{grid, Field2<FundamentalData>(grid), Field2<InvariantSet>(grid),
                      Field2<PointClass>(grid, PointClass::Flat), {}};
    for (std::size_t i = 0; i < grid.u.count; ++i)
        for (std::size_t j = 0; j < grid.v.count; ++j) {
            out.data(i, j) = fundamental_forms(s, grid.u.at(i), grid.v.at(j), tol);
            out.invariants(i, j) = invariants(out.data(i, j));
            const PointClass c = classify_point(out.invariants(i, j), tol);
            out.classes(i, j) = c;
            ++out.histogram[static_cast<std::size_t>(c)];
        }
    return out;
}

}  // namespace surf4
