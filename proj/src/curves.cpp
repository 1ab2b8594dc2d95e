#include "surf4/curves.hpp"

#include <algorithm>

#include "surf4/error.hpp"

namespace surf4 {

std::vector<double> fd_weights(double x0, std::span<const double> nodes, int order) {
    const std::size_t n = nodes.size();
    const auto m = static_cast<std::size_t>(order);
    if (order < 0 || n <= m) throw Error(ErrorCode::PreconditionFailed, "too few stencil nodes");
    // c[k][j]: weight of node j for derivative k.
    std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
    c[0][0] = 1.0;
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn; k >= 1; --k)
                    c[k][i] = c1 * (static_cast<double>(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k)
                c[k][j] = (c4 * c[k][j] - static_cast<double>(k) * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c[m];
}

std::array<Vec4, 5> curve_derivatives(const std::function<Vec4(double)>& c, double t, double h) {
    static const std::array<double, 9> offsets{-4, -3, -2, -1, 0, 1, 2, 3, 4};
    static const auto weights = [] {
        std::array<std::vector<double>, 5> w;
        for (int k = 0; k <= 4; ++k) w[static_cast<std::size_t>(k)] = fd_weights(0.0, offsets, k);
        return w;
    }();
    std::array<Vec4, 9> samples;
    for (std::size_t i = 0; i < 9; ++i) samples[i] = c(t + offsets[i] * h);
    std::array<Vec4, 5> out;
    for (std::size_t k = 0; k <= 4; ++k) {
        Vec4 s;
        for (std::size_t i = 0; i < 9; ++i) s += weights[k][i] * samples[i];
        out[k] = s / std::pow(h, static_cast<double>(k));
    }
    return out;
}

Vec4 positive_completion(const Vec4& a, const Vec4& b, const Vec4& c) {
    // Generalised cross product: component i is the cofactor of e_i.
    Vec4 r;
    for (std::size_t i = 0; i < 4; ++i) {
        Mat4 m = Mat4::from_rows(a, b, c, Vec4{});
        m[3][i] = 1.0;
        r[i] = det4(m);
    }
    const double n = norm(r);
    if (!(n > 0.0)) throw Error(ErrorCode::RankDeficient, "vectors do not span a 3-space");
    return r / n;
}

FrenetData frenet(const Vec4& d1, const Vec4& d2, const Vec4& d3, const Vec4& d4,
                  double planar_tol) {
    FrenetData out;
    const double speed = norm(d1);
    if (!(speed > 0.0)) throw Error(ErrorCode::Degenerate, "curve has zero speed");
    const Vec4 e1 = d1 / speed;
    Vec4 w2 = d2 - dot(d2, e1) * e1;
    const double n2 = norm(w2);
    out.kappa = n2 / (speed * speed);
    if (!(n2 > 0.0)) throw Error(ErrorCode::Degenerate, "curve is straight");
    const Vec4 e2 = w2 / n2;
    Vec4 w3 = d3 - dot(d3, e1) * e1 - dot(d3, e2) * e2;
    w3 -= dot(w3, e1) * e1 + dot(w3, e2) * e2;
    const double n3 = norm(w3);
    out.tau = n3 / (speed * speed * speed * out.kappa);
    out.frame.x = e1;
    out.frame.y = e2;
    if (n3 <= planar_tol * (norm(d3) + 1.0)) {
        out.planar = true;
        return out;
    }
    const Vec4 e3 = w3 / n3;
    const Vec4 e4 = positive_completion(e1, e2, e3);
    out.frame.n1 = e3;
    out.frame.n2 = e4;
    out.sigma = dot(d4, e4) / (std::pow(speed, 4) * out.kappa * out.tau);
    return out;
}

double plane_distance(const Vec4& p1, const Vec4& p2, const Vec4& q1, const Vec4& q2) {
    // Largest singular value of the residual of P after projecting onto Q;
    // avoids the cancellation in 1 - cos^2 for nearly equal planes.
    const Vec4 r1 = p1 - dot(p1, q1) * q1 - dot(p1, q2) * q2;
    const Vec4 r2 = p2 - dot(p2, q1) * q1 - dot(p2, q2) * q2;
    const double a = dot(r1, r1), b = dot(r1, r2), c = dot(r2, r2);
    const double largest = 0.5 * (a + c) + std::hypot(0.5 * (a - c), b);
    return std::sqrt(std::min(largest, 1.0));
}

}  // namespace surf4
