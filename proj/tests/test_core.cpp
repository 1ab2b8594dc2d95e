#include <doctest.h>

#include <random>

#include "surf4/error.hpp"
#include "surf4/geom4.hpp"
#include "surf4/grid.hpp"
#include "surf4/tolerances.hpp"

using namespace surf4;

namespace {

Mat4 random_matrix(std::mt19937& rng) {
    std::uniform_real_distribution<double> d(-1, 1);
    Mat4 m;
    for (auto& r : m.m)
        for (auto& x : r) x = d(rng);
    return m;
}

Frame4 random_frame(std::mt19937& rng) {
    const Mat4 m = random_matrix(rng);
    const std::vector<Vec4> rows{m.row(0), m.row(1), m.row(2), m.row(3)};
    const auto q = gram_schmidt(rows);
    Frame4 f{q[0], q[1], q[2], q[3]};
    if (orientation_det(f) < 0) f.n2 = -f.n2;
    return f;
}

}  // namespace

TEST_CASE("det4 of a permutation and of a product") {
    Mat4 p = Mat4::from_rows({0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1});
    CHECK(det4(p) == doctest::Approx(-1.0));
    std::mt19937 rng(7);
    for (int t = 0; t < 20; ++t) {
        const Mat4 a = random_matrix(rng), b = random_matrix(rng);
        CHECK(det4(a * b) == doctest::Approx(det4(a) * det4(b)).epsilon(1e-10));
    }
}

TEST_CASE("solve4 recovers the right-hand side and rejects singular systems") {
    std::mt19937 rng(11);
    for (int t = 0; t < 20; ++t) {
        const Mat4 a = random_matrix(rng);
        const Vec4 x{0.3, -1.2, 2.0, 0.5};
        const Vec4 y = solve4(a, a * x);
        CHECK(max_abs(y - x) < 1e-9);
    }
    Mat4 s = Mat4::from_rows({1, 2, 3, 4}, {2, 4, 6, 8}, {0, 1, 0, 1}, {1, 0, 1, 0});
    try {
        solve4(s, {1, 2, 3, 4});
        FAIL("expected RankDeficient");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::RankDeficient);
    }
}

TEST_CASE("gram_schmidt keeps the first direction and is orthonormal") {
    std::mt19937 rng(3);
    for (int t = 0; t < 20; ++t) {
        const Frame4 f = random_frame(rng);
        CHECK(f.orthonormality_defect() < 1e-14);
        CHECK(f.is_valid());
        CHECK(orientation_det(f) == doctest::Approx(1.0));
    }
    const std::vector<Vec4> v{{2, 0, 0, 0}, {1, 1, 0, 0}};
    const auto q = gram_schmidt(v);
    CHECK(q[0] == Vec4{1, 0, 0, 0});
    CHECK(max_abs(q[1] - Vec4{0, 1, 0, 0}) < 1e-15);
    const std::vector<Vec4> dep{{1, 2, 3, 4}, {2, 4, 6, 8}};
    CHECK_THROWS_AS(gram_schmidt(dep), Error);
}

TEST_CASE("rigid motions preserve distances and frames") {
    std::mt19937 rng(5);
    const Frame4 r = random_frame(rng);
    Motion4 m{r.matrix(), {1, -2, 0.5, 3}};
    const Vec4 p{0.1, 0.2, 0.3, 0.4}, q{-1, 0, 2, 1};
    CHECK(norm(m.apply(p) - m.apply(q)) == doctest::Approx(norm(p - q)).epsilon(1e-14));
    const Frame4 g = m.apply(random_frame(rng));
    CHECK(g.orthonormality_defect() < 1e-13);
    CHECK(orientation_det(g) == doctest::Approx(1.0));
}

TEST_CASE("Frame4 flags an orientation-reversed or skewed frame") {
    Frame4 f = Frame4::standard();
    CHECK(f.is_valid());
    f.n2 = -f.n2;
    CHECK(!f.is_valid());
    Frame4 g = Frame4::standard();
    g.y = Vec4{1e-6, 1, 0, 0};
    CHECK(!g.is_valid());
}

TEST_CASE("tolerances are settable by name and must be positive") {
    Tolerances t;
    CHECK(t.set("tol_min", 1e-5));
    CHECK(t.get("tol_min") == 1e-5);
    CHECK(!t.set("no_such", 1.0));
    CHECK_THROWS_AS(t.set("tol_min", 0.0), Error);
    CHECK(Tolerances::names().size() == 15);
    for (const auto& n : Tolerances::names()) CHECK(t.get(n) > 0);
}

TEST_CASE("stencils are exact on low-degree polynomials") {
    const Axis ax = Axis::spanning(0.0, 1.0, 11);
    std::vector<double> cubic, quartic;
    for (std::size_t i = 0; i < ax.count; ++i) {
        const double x = ax.at(i);
        cubic.push_back(x * x * x - x);
        quartic.push_back(x * x * x * x);
    }
    const auto d4 = stencil::derivative4(quartic, ax.step);
    for (std::size_t i = 0; i < ax.count; ++i) CHECK(d4[i] == doctest::Approx(4 * std::pow(ax.at(i), 3)).epsilon(1e-10));
    const auto d2 = stencil::derivative2(std::vector<double>{0, 1, 4, 9, 16}, 1.0);
    for (std::size_t i = 0; i < 5; ++i) CHECK(d2[i] == doctest::Approx(2.0 * i));
    for (std::size_t i = 1; i + 2 < ax.count; ++i) {
        const double x = ax.at(i) + 0.5 * ax.step;
        CHECK(stencil::midpoint_cubic(cubic, i) == doctest::Approx(x * x * x - x).epsilon(1e-12));
    }
    CHECK_THROWS_AS(stencil::derivative4(std::vector<double>{1, 2, 3, 4}, 1.0), Error);

    const auto w = stencil::lagrange_weights<5>(1.7);
    double v = 0, d1 = 0, dd = 0;
    for (std::size_t k = 0; k < 5; ++k) {
        const double x = static_cast<double>(k);
        v += w.value[k] * x * x * x;
        d1 += w.d1[k] * x * x * x;
        dd += w.d2[k] * x * x * x;
    }
    CHECK(v == doctest::Approx(1.7 * 1.7 * 1.7));
    CHECK(d1 == doctest::Approx(3 * 1.7 * 1.7));
    CHECK(dd == doctest::Approx(6 * 1.7));
}

TEST_CASE("field indexing is u-major") {
    Grid2 g{Axis::spanning(0, 1, 3), Axis::spanning(0, 1, 4)};
    ScalarField f(g, 0.0);
    f(1, 2) = 5.0;
    CHECK(f.values()[1 * 4 + 2] == 5.0);
    CHECK(g.interior().u.count == 1);
    CHECK(g.interior().v.start == doctest::Approx(1.0 / 3));
    const std::vector<double> vals{1.0, -3.0, std::nan("")};
    CHECK(max_abs_finite(vals) == 3.0);
    CHECK(mean_abs_finite(vals) == 2.0);
}
