#include <doctest.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "surf4/builtin.hpp"
#include "surf4/error.hpp"
#include "surf4/io.hpp"

using namespace surf4;
namespace fs = std::filesystem;

namespace {

/// Fresh scratch directory per test case.
fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("surf4_test_io_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

template <class Fn>
ErrorCode code_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Degenerate;
}

Field2<Vec4> sample(const ParametricSurface& s, std::size_t nu, std::size_t nv) {
    const Domain& d = s.domain();
    Field2<Vec4> f(Grid2{Axis::spanning(d.u_min, d.u_max, nu), Axis::spanning(d.v_min, d.v_max, nv)});
    for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t j = 0; j < nv; ++j) f(i, j) = s.position(f.grid().u.at(i), f.grid().v.at(j));
    return f;
}

}  // namespace

TEST_CASE("format_double reads back exactly") {
    CHECK(io::format_double(0.1) == "0.1");
    CHECK(io::format_double(-2.5) == "-2.5");
    CHECK(io::format_double(1e-300) == "1e-300");
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> d(-1e3, 1e3);
    std::vector<double> xs{std::numeric_limits<double>::denorm_min(), std::numeric_limits<double>::max(),
                           1.0 / 3.0, std::nextafter(1.0, 2.0)};
    for (int t = 0; t < 200; ++t) xs.push_back(d(rng) * std::pow(10.0, t % 20 - 10));
    for (double x : xs) {
        const std::string s = io::format_double(x);
        double y = 0;
        std::from_chars(s.data(), s.data() + s.size(), y);
        CHECK(y == x);
    }
}

TEST_CASE("CSV tables: round trip and malformed input") {
    const fs::path dir = scratch("csv");
    io::write_csv(dir / "t.csv", {"a", "b"}, {{"1", "2.5"}, {"-3", "1e-7"}});
    const io::CsvTable t = io::read_csv(dir / "t.csv");
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[1][1] == 1e-7);
    CHECK(t.column("b") == 1);
    CHECK(code_of([&] { t.column("c"); }) == ErrorCode::ParseError);

    io::write_text(dir / "bad.csv", "a,b\n1,2\n3,oops\n");
    CHECK(code_of([&] { io::read_csv(dir / "bad.csv"); }) == ErrorCode::ParseError);
    io::write_text(dir / "short.csv", "a,b\n1,2\n3\n");
    CHECK(code_of([&] { io::read_csv(dir / "short.csv"); }) == ErrorCode::ParseError);
    CHECK(code_of([&] { io::read_csv(dir / "missing.csv"); }) == ErrorCode::IOError);
}

TEST_CASE("key = value documents") {
    const io::Document doc = io::parse_document(
        "top = 1\n# comment\n[surface]\nkind = builtin ; trailing\nname=weierstrass\n\n[grid]\nnu = 11\n");
    CHECK(doc.at("").at("top") == "1");
    CHECK(doc.at("surface").at("kind") == "builtin");
    CHECK(doc.at("surface").at("name") == "weierstrass");
    CHECK(io::to_number("nu", doc.at("grid").at("nu")) == 11.0);
    CHECK(code_of([] { io::to_number("x", "1.5x"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { io::parse_document("[open\n"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { io::parse_document("no equals sign\n"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { io::parse_document("= 3\n"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { io::load_document("/nonexistent/surf4.cfg"); }) == ErrorCode::IOError);
}

TEST_CASE("profiles and invariant tables survive a write and read") {
    const fs::path dir = scratch("tables");
    const MeridianProfile p = solve_minimal_profile(1.0, 2.0, 1.0, 0.3, 1.2, 0.2, 1e-2);
    io::write_profile(dir / "profile.csv", p);
    const MeridianProfile q = io::read_profile(dir / "profile.csv");
    REQUIRE(q.nodes().size() == p.nodes().size());
    for (std::size_t i = 0; i < p.nodes().size(); ++i) {
        CHECK(q.nodes()[i].f == p.nodes()[i].f);
        CHECK(q.nodes()[i].g == p.nodes()[i].g);
    }
    CHECK(q.axis().step == doctest::Approx(p.axis().step));

    const ParametricSurface s = weierstrass_surface();
    const Domain& d = s.domain();
    const InvariantField f =
        frame_invariants_field(s, {Axis::spanning(d.u_min, d.u_max, 9), Axis::spanning(d.v_min, d.v_max, 7)});
    io::write_invariant_field(dir / "field.csv", f);
    const io::MuNuField back = io::read_invariant_field(dir / "field.csv");
    CHECK(back.mu.nu() == 9);
    CHECK(back.mu.nv() == 7);
    for (std::size_t n = 0; n < f.grid.size(); ++n) {
        CHECK(back.mu.values()[n] == f.nodes.values()[n].mu);
        CHECK(back.nu.values()[n] == f.nodes.values()[n].nu);
    }

    const ScalarProfile mu{Axis::spanning(0, 1, 6), {1, 2, 3, 4, 5, 6}};
    const ScalarProfile nu{Axis::spanning(0, 1, 6), {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}};
    io::write_invariant_profile(dir / "prof.csv", mu, nu);
    const io::MuNuProfile pr = io::read_invariant_profile(dir / "prof.csv");
    CHECK(pr.mu.values == mu.values);
    CHECK(pr.nu.values == nu.values);

    // Rows out of lattice order are refused.
    io::write_text(dir / "shuffled.csv", "u,v,mu,nu\n0,0,1,0.1\n1,0,1,0.1\n0,1,1,0.1\n1,1,1,0.1\n");
    CHECK(code_of([&] { io::read_invariant_field(dir / "shuffled.csv"); }) == ErrorCode::ParseError);
}

TEST_CASE("mesh export: a single quad") {
    const fs::path dir = scratch("quad");
    const io::MeshInfo info = io::write_mesh(dir, "plane", sample(plane_surface(), 2, 2));
    CHECK(info.vertices == 4);
    CHECK(info.quads == 1);
    CHECK(!info.welded_u);
    CHECK(!info.welded_v);
    CHECK(slurp(dir / "plane.mesh4") ==
          "# mesh4: x1 x2 x3 x4 per vertex, 0-based quads\nvertices 4\n-1 -1 0 0\n-1 1 0 0\n1 -1 0 0\n1 1 0 0\n"
          "quads 1\n0 2 3 1\n");
    const std::string obj = slurp(dir / "plane_xyw.obj");
    CHECK(obj.find("v 1 -1 0\n") != std::string::npos);
    CHECK(obj.find("f 1 3 4 2\n") != std::string::npos);
    CHECK(fs::exists(dir / "plane_xyz.obj"));
    CHECK(fs::exists(dir / "plane_xzw.obj"));
}

TEST_CASE("mesh export: the seam of a closed surface is welded") {
    const fs::path dir = scratch("seam");
    const io::MeshInfo info = io::write_mesh(dir, "rot", sample(closed_rotational(), 10, 33));
    CHECK(info.welded_v);
    CHECK(!info.welded_u);
    CHECK(info.vertices == 10 * 32);
    CHECK(info.quads == 9 * 32);
    const io::MeshInfo torus = io::write_mesh(dir, "torus", sample(clifford_torus(), 17, 17));
    CHECK(torus.welded_u);
    CHECK(torus.welded_v);
    CHECK(torus.vertices == 16 * 16);
}

TEST_CASE("mesh export: a lattice too small for a quad writes nothing") {
    const fs::path dir = scratch("empty");
    CHECK(code_of([&] { io::write_mesh(dir, "none", sample(plane_surface(), 1, 5)); }) ==
          ErrorCode::PreconditionFailed);
    CHECK(fs::is_empty(dir));
}

TEST_CASE("outputs are byte-identical across runs") {
    const fs::path dir = scratch("determinism");
    const ParametricSurface s = weierstrass_surface();
    const Domain& d = s.domain();
    const Grid2 g{Axis::spanning(d.u_min, d.u_max, 21), Axis::spanning(d.v_min, d.v_max, 13)};
    io::write_invariants(dir / "a.csv", analyze_grid(s, g));
    io::write_invariants(dir / "b.csv", analyze_grid(s, g));
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    io::write_mesh(dir, "a", sample(s, 21, 13));
    io::write_mesh(dir, "b", sample(s, 21, 13));
    CHECK(slurp(dir / "a.mesh4") == slurp(dir / "b.mesh4"));
    CHECK(slurp(dir / "a_xzw.obj") == slurp(dir / "b_xzw.obj"));
}
