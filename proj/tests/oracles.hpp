#pragma once

// Reference computations used by the tests. They only use chart positions
// and plain linear algebra, never the library's own decomposition, so a
// mistake in the library does not cancel against the same mistake here.

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "surf4/geom4.hpp"
#include "surf4/surface.hpp"

namespace oracle {

using surf4::Vec4;

struct Partials {
    Vec4 zu, zv, zuu, zuv, zvv;
};

/// Fourth-order central differences of the chart position with step h.
inline Partials fd_partials(const surf4::ParametricSurface& s, double u, double v, double h) {
    auto z = [&](double a, double b) { return s.position(u + a * h, v + b * h); };
    const double w1[] = {1.0 / 12, -2.0 / 3, 0, 2.0 / 3, -1.0 / 12};
    const double w2[] = {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
    Partials p;
    for (int k = 0; k < 5; ++k) {
        const double o = k - 2;
        p.zu += w1[k] / h * z(o, 0);
        p.zv += w1[k] / h * z(0, o);
        p.zuu += w2[k] / (h * h) * z(o, 0);
        p.zvv += w2[k] / (h * h) * z(0, o);
        for (int m = 0; m < 5; ++m) p.zuv += w1[k] * w1[m] / (h * h) * z(o, m - 2);
    }
    return p;
}

inline double det4(const std::array<Vec4, 4>& c) {
    // Laplace expansion along the first column.
    auto det3 = [](double a, double b, double cc, double d, double e, double f, double g, double hh, double i) {
        return a * (e * i - f * hh) - b * (d * i - f * g) + cc * (d * hh - e * g);
    };
    double s = 0;
    for (int r = 0; r < 4; ++r) {
        double m[9];
        int k = 0;
        for (int rr = 0; rr < 4; ++rr) {
            if (rr == r) continue;
            for (int cc = 1; cc < 4; ++cc) m[k++] = c[static_cast<std::size_t>(cc)][static_cast<std::size_t>(rr)];
        }
        s += ((r % 2) ? -1.0 : 1.0) * c[0][static_cast<std::size_t>(r)] *
             det3(m[0], m[1], m[2], m[3], m[4], m[5], m[6], m[7], m[8]);
    }
    return s;
}

/// Second fundamental form on the orthonormal tangent frame
/// x = z_u/|z_u|, y = Gram-Schmidt of z_v, with a normal frame n1, n2 making
/// (x, y, n1, n2) positively oriented.
struct SecondForm {
    Vec4 x, y, n1, n2;
    Vec4 sxx, sxy, syy;
    double k = 0, kappa = 0, K = 0;
};

inline SecondForm second_form(const Partials& p) {
    SecondForm f;
    auto unit = [](const Vec4& a) { return a / surf4::norm(a); };
    f.x = unit(p.zu);
    const double a0 = surf4::dot(p.zv, f.x);
    const Vec4 yraw = p.zv - a0 * f.x;
    const double ylen = surf4::norm(yraw);
    f.y = yraw / ylen;
    // Normal basis: Gram-Schmidt of the coordinate axis pair that is most
    // transverse to the tangent plane.
    std::vector<Vec4> normals;
    for (int e = 0; e < 4 && normals.size() < 2; ++e) {
        Vec4 w;
        w[static_cast<std::size_t>(e)] = 1;
        w -= surf4::dot(w, f.x) * f.x + surf4::dot(w, f.y) * f.y;
        for (const auto& q : normals) w -= surf4::dot(w, q) * q;
        if (surf4::norm(w) > 0.3) normals.push_back(unit(w));
    }
    f.n1 = normals.at(0);
    f.n2 = normals.at(1);
    if (det4({f.x, f.y, f.n1, f.n2}) < 0) f.n2 = -1.0 * f.n2;
    auto normal_part = [&](const Vec4& w) {
        return w - surf4::dot(w, f.x) * f.x - surf4::dot(w, f.y) * f.y;
    };
    const Vec4 suu = normal_part(p.zuu), suv = normal_part(p.zuv), svv = normal_part(p.zvv);
    // y = (z_v - a0 x)/ylen = c_u z_u + c_v z_v.
    const double E = surf4::dot(p.zu, p.zu);
    const double cv = 1.0 / ylen, cu = -a0 / (ylen * std::sqrt(E));
    f.sxx = suu / E;
    f.sxy = (cu * suu + cv * suv) / std::sqrt(E);
    f.syy = cu * cu * suu + 2 * cu * cv * suv + cv * cv * svv;
    auto wedge = [&](const Vec4& a, const Vec4& b) {
        return surf4::dot(a, f.n1) * surf4::dot(b, f.n2) - surf4::dot(a, f.n2) * surf4::dot(b, f.n1);
    };
    const double L = 2 * wedge(f.sxx, f.sxy), M = wedge(f.sxx, f.syy), N = 2 * wedge(f.sxy, f.syy);
    f.k = L * N - M * M;
    f.kappa = 0.5 * (L + N);
    f.K = surf4::dot(f.sxx, f.syy) - surf4::dot(f.sxy, f.sxy);
    return f;
}

/// {mu^2, nu^2} as an ascending pair from K = -(mu^2+nu^2), kappa = 2 mu nu.
inline std::pair<double, double> squares_from(double K, double kappa) {
    const double s = -K, p = 0.25 * kappa * kappa;
    const double disc = std::sqrt(std::max(s * s - 4 * p, 0.0));
    return {0.5 * (s - disc), 0.5 * (s + disc)};
}

/// Second derivative of equally spaced samples at interior index i (5-point).
inline Vec4 second_difference(const std::vector<Vec4>& pts, std::size_t i, double h) {
    return (-1.0 / 12 * pts[i - 2] + 4.0 / 3 * pts[i - 1] - 2.5 * pts[i] + 4.0 / 3 * pts[i + 1] -
            1.0 / 12 * pts[i + 2]) /
           (h * h);
}

}  // namespace oracle
