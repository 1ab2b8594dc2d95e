#include "surf4/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "surf4/error.hpp"

namespace surf4::io {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, sep)) out.push_back(trim(cell));
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IOError, "cannot write " + path.string());
    return out;
}

std::string read_all(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IOError, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Recovers a uniform axis from the distinct values of a lattice coordinate.
Axis axis_from(const std::vector<double>& values, const std::string& what) {
    if (values.size() < 2) return {values.empty() ? 0.0 : values[0], 1.0, values.size()};
    const Axis ax = Axis::spanning(values.front(), values.back(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        if (std::abs(values[i] - ax.at(i)) > 1e-9 * (std::abs(ax.step) + std::abs(values[i])))
            throw Error(ErrorCode::ParseError, what + " values do not form a uniform lattice");
    if (!(ax.step > 0.0)) throw Error(ErrorCode::ParseError, what + " values must increase");
    return ax;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(ErrorCode::ParseError, "missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

double to_number(const std::string& key, const std::string& value) {
    double x = 0.0;
    const char* first = value.data();
    const char* last = first + value.size();
    if (!value.empty() && *first == '+') ++first;
    const auto res = std::from_chars(first, last, x);
    if (value.empty() || res.ec != std::errc{} || res.ptr != last)
        throw Error(ErrorCode::ParseError, "'" + key + "': not a number: '" + value + "'");
    return x;
}

CsvTable read_csv(const fs::path& path) {
    std::istringstream in(read_all(path));
    CsvTable t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto cells = split(line, ',');
        if (t.header.empty()) {
            t.header = std::move(cells);
            continue;
        }
        if (cells.size() != t.header.size())
            throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(lineno) +
                                                   ": expected " + std::to_string(t.header.size()) +
                                                   " fields");
        std::vector<double> row;
        row.reserve(cells.size());
        for (std::size_t k = 0; k < cells.size(); ++k)
            row.push_back(to_number(path.string() + ":" + std::to_string(lineno) + " " + t.header[k],
                                    cells[k]));
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty()) throw Error(ErrorCode::ParseError, path.string() + ": empty CSV");
    return t;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream ss;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) ss << (k ? "," : "") << cells[k];
        ss << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    write_text(path, ss.str());
}

void write_text(const fs::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
    if (!out) throw Error(ErrorCode::IOError, "write failed: " + path.string());
}

Document parse_document(const std::string& text) {
    Document doc;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": bad section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            doc[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        if (key.empty())
            throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": empty key");
        doc[section][key] = trim(std::string_view(line).substr(eq + 1));
    }
    return doc;
}

Document load_document(const fs::path& path) { return parse_document(read_all(path)); }

void write_profile(const fs::path& path, const MeridianProfile& p) {
    const bool fg = p.form() == ProfileForm::FG;
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < p.nodes().size(); ++i)
        rows.push_back({format_double(p.axis().at(i)), format_double(p.nodes()[i].f),
                        format_double(p.nodes()[i].g)});
    write_csv(path, fg ? std::vector<std::string>{"u", "f", "g"} : std::vector<std::string>{"u", "A", "B"},
              rows);
}

MeridianProfile read_profile(const fs::path& path) {
    const CsvTable t = read_csv(path);
    const bool fg = std::find(t.header.begin(), t.header.end(), "f") != t.header.end();
    const std::size_t cu = t.column("u"), cf = t.column(fg ? "f" : "A"), cg = t.column(fg ? "g" : "B");
    std::vector<double> u, f, g;
    for (const auto& r : t.rows) {
        u.push_back(r[cu]);
        f.push_back(r[cf]);
        g.push_back(r[cg]);
    }
    if (u.size() < 5) throw Error(ErrorCode::ParseError, path.string() + ": fewer than 5 profile rows");
    return MeridianProfile::from_samples(axis_from(u, "u"), f, g, fg ? ProfileForm::FG : ProfileForm::AB);
}

void write_invariants(const fs::path& path, const AnalysisSweep& sweep) {
    std::vector<std::vector<std::string>> rows;
    const Grid2& g = sweep.grid;
    for (std::size_t i = 0; i < g.u.count; ++i)
        for (std::size_t j = 0; j < g.v.count; ++j) {
            const FundamentalData& fd = sweep.data(i, j);
            const InvariantSet& inv = sweep.invariants(i, j);
            rows.push_back({format_double(g.u.at(i)), format_double(g.v.at(j)), format_double(fd.E),
                            format_double(fd.F), format_double(fd.G), format_double(inv.L),
                            format_double(inv.M), format_double(inv.N), format_double(inv.k),
                            format_double(inv.kappa), format_double(inv.K),
                            std::string(to_string(sweep.classes(i, j)))});
        }
    write_csv(path, {"u", "v", "E", "F", "G", "L", "M", "N", "k", "kappa", "K", "class"}, rows);
}

void write_invariant_field(const fs::path& path, const InvariantField& field) {
    std::vector<std::vector<std::string>> rows;
    const Grid2& g = field.grid;
    for (std::size_t i = 0; i < g.u.count; ++i)
        for (std::size_t j = 0; j < g.v.count; ++j) {
            const CanonicalFrameData& n = field.nodes(i, j);
            rows.push_back({format_double(g.u.at(i)), format_double(g.v.at(j)), format_double(n.nu),
                            format_double(n.mu), format_double(n.gamma1), format_double(n.gamma2),
                            format_double(n.beta1), format_double(n.beta2),
                            format_double(field.E(i, j)), format_double(field.G(i, j))});
        }
    write_csv(path, {"u", "v", "nu", "mu", "gamma1", "gamma2", "beta1", "beta2", "E", "G"}, rows);
}

MuNuField read_invariant_field(const fs::path& path) {
    const CsvTable t = read_csv(path);
    const std::size_t cu = t.column("u"), cv = t.column("v"), cmu = t.column("mu"), cnu = t.column("nu");
    if (t.rows.empty()) throw Error(ErrorCode::ParseError, path.string() + ": no rows");
    std::size_t nv = 0;
    while (nv < t.rows.size() && t.rows[nv][cu] == t.rows[0][cu]) ++nv;
    if (t.rows.size() % nv != 0)
        throw Error(ErrorCode::ParseError, path.string() + ": rows do not fill a lattice");
    const std::size_t nu = t.rows.size() / nv;
    std::vector<double> us, vs;
    for (std::size_t i = 0; i < nu; ++i) us.push_back(t.rows[i * nv][cu]);
    for (std::size_t j = 0; j < nv; ++j) vs.push_back(t.rows[j][cv]);
    const Grid2 grid{axis_from(us, "u"), axis_from(vs, "v")};
    MuNuField out{ScalarField(grid), ScalarField(grid)};
    for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t j = 0; j < nv; ++j) {
            const auto& r = t.rows[i * nv + j];
            if (r[cu] != us[i] || r[cv] != vs[j])
                throw Error(ErrorCode::ParseError, path.string() + ": rows are not in u-major lattice order");
            out.mu(i, j) = r[cmu];
            out.nu(i, j) = r[cnu];
        }
    return out;
}

void write_invariant_profile(const fs::path& path, const ScalarProfile& mu, const ScalarProfile& nu) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < mu.size(); ++i)
        rows.push_back({format_double(mu.u.at(i)), format_double(mu[i]), format_double(nu[i])});
    write_csv(path, {"u", "mu", "nu"}, rows);
}

MuNuProfile read_invariant_profile(const fs::path& path) {
    const CsvTable t = read_csv(path);
    const std::size_t cu = t.column("u"), cmu = t.column("mu"), cnu = t.column("nu");
    std::vector<double> u, mu, nu;
    for (const auto& r : t.rows) {
        u.push_back(r[cu]);
        mu.push_back(r[cmu]);
        nu.push_back(r[cnu]);
    }
    if (u.size() < 5) throw Error(ErrorCode::ParseError, path.string() + ": fewer than 5 rows");
    const Axis ax = axis_from(u, "u");
    return {ScalarProfile{ax, mu}, ScalarProfile{ax, nu}};
}

void write_residuals(const fs::path& path, const FieldResiduals& r) {
    std::vector<std::vector<std::string>> rows;
    const Grid2& g = r.r1.grid();
    for (std::size_t i = 0; i < g.u.count; ++i)
        for (std::size_t j = 0; j < g.v.count; ++j)
            rows.push_back({format_double(g.u.at(i)), format_double(g.v.at(j)),
                            format_double(r.r1(i, j)), format_double(r.r2(i, j))});
    write_csv(path, {"u", "v", "r1", "r2"}, rows);
}

void write_residuals(const fs::path& path, const ProfileResiduals& r) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < r.r1.size(); ++i)
        rows.push_back({format_double(r.r1.u.at(i)), format_double(r.r1[i]), format_double(r.r2[i])});
    write_csv(path, {"u", "r1", "r2"}, rows);
}

MeshInfo write_mesh(const fs::path& dir, const std::string& stem, const Field2<Vec4>& points) {
    const std::size_t nu = points.nu(), nv = points.nv();
    if (nu < 2 || nv < 2)
        throw Error(ErrorCode::PreconditionFailed, "mesh needs at least 2 nodes per axis");
    MeshInfo info;
    auto close = [](const Vec4& a, const Vec4& b) { return norm(a - b) <= 1e-9; };
    info.welded_v = nv > 2;
    for (std::size_t i = 0; i < nu && info.welded_v; ++i)
        info.welded_v = close(points(i, 0), points(i, nv - 1));
    info.welded_u = nu > 2;
    for (std::size_t j = 0; j < nv && info.welded_u; ++j)
        info.welded_u = close(points(0, j), points(nu - 1, j));
    const std::size_t mu = info.welded_u ? nu - 1 : nu;
    const std::size_t mv = info.welded_v ? nv - 1 : nv;
    auto vid = [&](std::size_t i, std::size_t j) { return (i % mu) * mv + (j % mv); };
    info.vertices = mu * mv;
    info.quads = (nu - 1) * (nv - 1);

    std::ostringstream m4;
    m4 << "# mesh4: x1 x2 x3 x4 per vertex, 0-based quads\n";
    m4 << "vertices " << info.vertices << '\n';
    for (std::size_t i = 0; i < mu; ++i)
        for (std::size_t j = 0; j < mv; ++j) {
            const Vec4& p = points(i, j);
            m4 << format_double(p[0]) << ' ' << format_double(p[1]) << ' ' << format_double(p[2])
               << ' ' << format_double(p[3]) << '\n';
        }
    m4 << "quads " << info.quads << '\n';
    std::ostringstream faces;
    for (std::size_t i = 0; i + 1 < nu; ++i)
        for (std::size_t j = 0; j + 1 < nv; ++j) {
            const std::size_t q[4] = {vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)};
            m4 << q[0] << ' ' << q[1] << ' ' << q[2] << ' ' << q[3] << '\n';
            faces << "f " << q[0] + 1 << ' ' << q[1] + 1 << ' ' << q[2] + 1 << ' ' << q[3] + 1 << '\n';
        }
    write_text(dir / (stem + ".mesh4"), m4.str());

    const std::pair<const char*, std::array<std::size_t, 3>> projections[] = {
        {"xyz", {0, 1, 2}}, {"xyw", {0, 1, 3}}, {"xzw", {0, 2, 3}}};
    for (const auto& [name, axes] : projections) {
        std::ostringstream obj;
        obj << "# orthogonal projection onto coordinates " << name << '\n';
        for (std::size_t i = 0; i < mu; ++i)
            for (std::size_t j = 0; j < mv; ++j) {
                const Vec4& p = points(i, j);
                obj << "v " << format_double(p[axes[0]]) << ' ' << format_double(p[axes[1]]) << ' '
                    << format_double(p[axes[2]]) << '\n';
            }
        obj << faces.str();
        write_text(dir / (stem + "_" + name + ".obj"), obj.str());
    }
    return info;
}

}  // namespace surf4::io
