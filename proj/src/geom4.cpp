#include "surf4/geom4.hpp"

#include <algorithm>
#include <utility>

#include "surf4/error.hpp"

namespace surf4 {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::Degenerate: return "Degenerate";
        case ErrorCode::FDFailure: return "FDFailure";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::SuperConformal: return "SuperConformal";
        case ErrorCode::NotGeneralType: return "NotGeneralType";
        case ErrorCode::NotSemiCanonical: return "NotSemiCanonical";
        case ErrorCode::LemmaViolated: return "LemmaViolated";
        case ErrorCode::LeftDomain: return "LeftDomain";
        case ErrorCode::GridTooSmall: return "GridTooSmall";
        case ErrorCode::DegenerateInvariants: return "DegenerateInvariants";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::BranchBreak: return "BranchBreak";
        case ErrorCode::CompatibilityRejected: return "CompatibilityRejected";
        case ErrorCode::DriftExceeded: return "DriftExceeded";
        case ErrorCode::ClosureExceeded: return "ClosureExceeded";
        case ErrorCode::NotUnitSpeed: return "NotUnitSpeed";
        case ErrorCode::CircleDegenerate: return "CircleDegenerate";
        case ErrorCode::IrregularProfile: return "IrregularProfile";
        case ErrorCode::PreconditionFailed: return "PreconditionFailed";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IOError: return "IOError";
    }
    return "Unknown";
}

Vec4 Vec4::checked(double x0, double x1, double x2, double x3) {
    Vec4 v{x0, x1, x2, x3};
    if (!v.is_finite()) throw Error(ErrorCode::FDFailure, "non-finite vector component");
    return v;
}

double max_abs(const Vec4& a) {
    double r = 0.0;
    for (double x : a.c) r = std::max(r, std::abs(x));
    return r;
}

Mat4 Mat4::identity() {
    Mat4 r;
    for (std::size_t i = 0; i < 4; ++i) r.m[i][i] = 1.0;
    return r;
}

Mat4 Mat4::from_rows(const Vec4& r0, const Vec4& r1, const Vec4& r2, const Vec4& r3) {
    Mat4 r;
    const Vec4* rows[4] = {&r0, &r1, &r2, &r3};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) r.m[i][j] = rows[i]->c[j];
    return r;
}

Mat4 Mat4::transposed() const {
    Mat4 r;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) r.m[i][j] = m[j][i];
    return r;
}

Mat4 operator*(const Mat4& a, const Mat4& b) {
    Mat4 r;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t k = 0; k < 4; ++k) {
            const double aik = a.m[i][k];
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < 4; ++j) r.m[i][j] += aik * b.m[k][j];
        }
    return r;
}

Mat4 operator+(const Mat4& a, const Mat4& b) {
    Mat4 r;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) r.m[i][j] = a.m[i][j] + b.m[i][j];
    return r;
}

Mat4 operator-(const Mat4& a, const Mat4& b) {
    Mat4 r;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) r.m[i][j] = a.m[i][j] - b.m[i][j];
    return r;
}

Mat4 operator*(double s, const Mat4& a) {
    Mat4 r;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) r.m[i][j] = s * a.m[i][j];
    return r;
}

Vec4 operator*(const Mat4& a, const Vec4& v) {
    Vec4 r;
    for (std::size_t i = 0; i < 4; ++i)
        r.c[i] = a.m[i][0] * v.c[0] + a.m[i][1] * v.c[1] + a.m[i][2] * v.c[2] + a.m[i][3] * v.c[3];
    return r;
}

double max_abs(const Mat4& a) {
    double r = 0.0;
    for (const auto& row : a.m)
        for (double x : row) r = std::max(r, std::abs(x));
    return r;
}

double det2(double a11, double a12, double a21, double a22) { return a11 * a22 - a12 * a21; }

double det4(const Mat4& a) {
    // LU with partial pivoting; sign tracks row swaps.
    Mat4 m = a;
    double det = 1.0;
    for (std::size_t col = 0; col < 4; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < 4; ++r)
            if (std::abs(m.m[r][col]) > std::abs(m.m[piv][col])) piv = r;
        if (m.m[piv][col] == 0.0) return 0.0;
        if (piv != col) {
            std::swap(m.m[piv], m.m[col]);
            det = -det;
        }
        det *= m.m[col][col];
        for (std::size_t r = col + 1; r < 4; ++r) {
            const double f = m.m[r][col] / m.m[col][col];
            for (std::size_t c = col; c < 4; ++c) m.m[r][c] -= f * m.m[col][c];
        }
    }
    return det;
}

Vec4 solve4(Mat4 a, Vec4 b, double tol_rank) {
    const double scale = std::max(max_abs(a), 1e-300);
    for (std::size_t col = 0; col < 4; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < 4; ++r)
            if (std::abs(a.m[r][col]) > std::abs(a.m[piv][col])) piv = r;
        if (std::abs(a.m[piv][col]) <= tol_rank * scale)
            throw Error(ErrorCode::RankDeficient, "singular 4x4 system");
        std::swap(a.m[piv], a.m[col]);
        std::swap(b.c[piv], b.c[col]);
        for (std::size_t r = col + 1; r < 4; ++r) {
            const double f = a.m[r][col] / a.m[col][col];
            for (std::size_t c = col; c < 4; ++c) a.m[r][c] -= f * a.m[col][c];
            b.c[r] -= f * b.c[col];
        }
    }
    Vec4 x;
    for (std::size_t i = 4; i-- > 0;) {
        double s = b.c[i];
        for (std::size_t j = i + 1; j < 4; ++j) s -= a.m[i][j] * x.c[j];
        x.c[i] = s / a.m[i][i];
    }
    return x;
}

Frame4 Frame4::standard() {
    return {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
}

Frame4 Frame4::from_matrix(const Mat4& rows) {
    return {rows.row(0), rows.row(1), rows.row(2), rows.row(3)};
}

Mat4 Frame4::matrix() const { return Mat4::from_rows(x, y, n1, n2); }

const Vec4& Frame4::operator[](std::size_t i) const {
    switch (i) {
        case 0: return x;
        case 1: return y;
        case 2: return n1;
        default: return n2;
    }
}

Vec4& Frame4::operator[](std::size_t i) {
    return const_cast<Vec4&>(std::as_const(*this)[i]);
}

double Frame4::orthonormality_defect() const {
    double d = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i; j < 4; ++j)
            d = std::max(d, std::abs(dot((*this)[i], (*this)[j]) - (i == j ? 1.0 : 0.0)));
    return d;
}

bool Frame4::is_valid(double tol_ortho) const {
    return orthonormality_defect() <= tol_ortho &&
           std::abs(orientation_det(*this) - 1.0) <= tol_ortho;
}

double orientation_det(const Frame4& f) { return det4(f.matrix()); }

std::vector<Vec4> gram_schmidt(std::span<const Vec4> vectors, double tol_rank) {
    std::vector<Vec4> out;
    out.reserve(vectors.size());
    for (const Vec4& v : vectors) {
        Vec4 w = v;
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec4& q : out) w -= dot(w, q) * q;
        const double n = norm(w);
        if (!(n > tol_rank)) throw Error(ErrorCode::RankDeficient, "Gram-Schmidt pivot vanished");
        out.push_back(w / n);
    }
    return out;
}

Frame4 Motion4::apply(const Frame4& f) const {
    return {rotation * f.x, rotation * f.y, rotation * f.n1, rotation * f.n2};
}

}  // namespace surf4
