#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace surf4 {

/// Point or vector in four-dimensional Euclidean space.
struct Vec4 {
    std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};

    constexpr Vec4() = default;
    constexpr Vec4(double x0, double x1, double x2, double x3) : c{x0, x1, x2, x3} {}

    /// Throws Error(FDFailure) on NaN/Inf components.
    static Vec4 checked(double x0, double x1, double x2, double x3);

    constexpr double& operator[](std::size_t i) { return c[i]; }
    constexpr double operator[](std::size_t i) const { return c[i]; }

    bool is_finite() const {
        return std::isfinite(c[0]) && std::isfinite(c[1]) && std::isfinite(c[2]) &&
               std::isfinite(c[3]);
    }

    constexpr Vec4& operator+=(const Vec4& o) {
        for (std::size_t i = 0; i < 4; ++i) c[i] += o.c[i];
        return *this;
    }
    constexpr Vec4& operator-=(const Vec4& o) {
        for (std::size_t i = 0; i < 4; ++i) c[i] -= o.c[i];
        return *this;
    }
    constexpr Vec4& operator*=(double s) {
        for (auto& x : c) x *= s;
        return *this;
    }
    constexpr Vec4& operator/=(double s) {
        for (auto& x : c) x /= s;
        return *this;
    }

    friend constexpr Vec4 operator+(Vec4 a, const Vec4& b) { return a += b; }
    friend constexpr Vec4 operator-(Vec4 a, const Vec4& b) { return a -= b; }
    friend constexpr Vec4 operator-(Vec4 a) { return a *= -1.0; }
    friend constexpr Vec4 operator*(Vec4 a, double s) { return a *= s; }
    friend constexpr Vec4 operator*(double s, Vec4 a) { return a *= s; }
    friend constexpr Vec4 operator/(Vec4 a, double s) { return a /= s; }
    friend constexpr bool operator==(const Vec4&, const Vec4&) = default;
};

constexpr double dot(const Vec4& a, const Vec4& b) {
    return a.c[0] * b.c[0] + a.c[1] * b.c[1] + a.c[2] * b.c[2] + a.c[3] * b.c[3];
}
inline double norm(const Vec4& a) { return std::sqrt(dot(a, a)); }
inline Vec4 normalized(const Vec4& a) { return a / norm(a); }
double max_abs(const Vec4& a);

/// Row-major 4x4 matrix.
struct Mat4 {
    std::array<std::array<double, 4>, 4> m{};

    static Mat4 identity();
    static Mat4 from_rows(const Vec4& r0, const Vec4& r1, const Vec4& r2, const Vec4& r3);

    std::array<double, 4>& operator[](std::size_t i) { return m[i]; }
    const std::array<double, 4>& operator[](std::size_t i) const { return m[i]; }

    Vec4 row(std::size_t i) const { return {m[i][0], m[i][1], m[i][2], m[i][3]}; }
    Mat4 transposed() const;

    friend Mat4 operator*(const Mat4& a, const Mat4& b);
    friend Mat4 operator+(const Mat4& a, const Mat4& b);
    friend Mat4 operator-(const Mat4& a, const Mat4& b);
    friend Mat4 operator*(double s, const Mat4& a);
    friend Vec4 operator*(const Mat4& a, const Vec4& v);
};

double max_abs(const Mat4& a);
double det2(double a11, double a12, double a21, double a22);
double det4(const Mat4& a);

/// Solves a x = b by Gaussian elimination with partial pivoting.
/// Throws Error(RankDeficient) when a pivot falls below `tol_rank` relative to
/// the largest matrix entry.
Vec4 solve4(Mat4 a, Vec4 b, double tol_rank = 1e-12);

/// Ordered orthonormal frame {x, y, n1, n2}. Rows of the associated matrix.
struct Frame4 {
    Vec4 x, y, n1, n2;

    static Frame4 standard();
    static Frame4 from_matrix(const Mat4& rows);
    Mat4 matrix() const;

    const Vec4& operator[](std::size_t i) const;
    Vec4& operator[](std::size_t i);

    /// Largest |<e_i, e_j> - delta_ij| over the ten independent pairs.
    double orthonormality_defect() const;
    bool is_valid(double tol_ortho = 1e-9) const;
};

double orientation_det(const Frame4& f);

/// Modified Gram-Schmidt (with one re-orthogonalisation pass). The first
/// output keeps the direction of the first input. Throws Error(RankDeficient)
/// when a pivot norm is at or below `tol_rank`.
std::vector<Vec4> gram_schmidt(std::span<const Vec4> vectors, double tol_rank = 1e-12);

/// Rigid motion q -> R q + t with R orthogonal.
struct Motion4 {
    Mat4 rotation = Mat4::identity();
    Vec4 translation{};

    Vec4 apply(const Vec4& p) const { return rotation * p + translation; }
    Vec4 apply_linear(const Vec4& d) const { return rotation * d; }
    Frame4 apply(const Frame4& f) const;
};

}  // namespace surf4
