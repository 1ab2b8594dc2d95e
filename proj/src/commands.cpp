#include "surf4/commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

#include "surf4/bonnet.hpp"
#include "surf4/builtin.hpp"
#include "surf4/error.hpp"

namespace surf4::cli {

int exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::ParseError:
        case ErrorCode::IOError:
            return Parse;
        case ErrorCode::NotSemiCanonical:
        case ErrorCode::LemmaViolated:
        case ErrorCode::DriftExceeded:
        case ErrorCode::ClosureExceeded:
            return Tolerance;
        case ErrorCode::CompatibilityRejected:
            return Compatibility;
        default:
            return DegenerateInput;
    }
}

SurfaceSpec SurfaceSpec::from_document(const io::Document& doc, const io::fs::path& base_dir) {
    const auto it = doc.find("surface");
    if (it == doc.end()) throw Error(ErrorCode::ParseError, "spec has no [surface] section");
    SurfaceSpec s;
    s.params = it->second;
    s.base_dir = base_dir;
    s.kind = s.text("kind");
    static const char* kinds[] = {"builtin", "rotational-profile", "rotational-ode", "invariant-field",
                                  "invariant-profile"};
    if (std::find(std::begin(kinds), std::end(kinds), s.kind) == std::end(kinds))
        throw Error(ErrorCode::ParseError, "unknown surface kind '" + s.kind + "'");
    s.params.erase("kind");
    return s;
}

std::string SurfaceSpec::text(const std::string& key) const {
    const auto it = params.find(key);
    if (it == params.end() && key != "kind")
        throw Error(ErrorCode::ParseError, "spec is missing '" + key + "'");
    if (it == params.end()) throw Error(ErrorCode::ParseError, "spec is missing 'kind'");
    return it->second;
}

double SurfaceSpec::number(const std::string& key) const { return io::to_number(key, text(key)); }

double SurfaceSpec::number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

io::fs::path SurfaceSpec::file(const std::string& key) const {
    io::fs::path p = text(key);
    if (p.is_relative()) p = base_dir / p;
    if (!io::fs::exists(p)) throw Error(ErrorCode::ParseError, "file not found: " + p.string());
    return p;
}

namespace {

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "yes" || value == "1" || value == "on") return true;
    if (value == "false" || value == "no" || value == "0" || value == "off") return false;
    throw Error(ErrorCode::ParseError, "'" + key + "': expected a boolean, got '" + value + "'");
}

std::size_t to_count(const std::string& key, const std::string& value) {
    const double x = io::to_number(key, value);
    if (!(x >= 2.0) || x != std::floor(x) || x > 1e7)
        throw Error(ErrorCode::ParseError, "'" + key + "': expected an integer >= 2");
    return static_cast<std::size_t>(x);
}

std::string fmt(double x) { return io::format_double(x); }

struct Summary {
    std::ostringstream text;
    template <class T>
    Summary& line(const std::string& key, const T& value) {
        text << key << ": " << value << '\n';
        return *this;
    }
    Summary& num(const std::string& key, double value) { return line(key, fmt(value)); }
};

void finish(const Summary& s, const RunConfig& cfg, std::ostream& out) {
    out << s.text.str();
    if (cfg.summary) io::write_text(cfg.out_dir / "summary.txt", s.text.str());
}

}  // namespace

void RunConfig::apply(const io::Document& doc) {
    if (const auto it = doc.find("tolerances"); it != doc.end())
        for (const auto& [k, v] : it->second)
            if (!tol.set(k, io::to_number(k, v)))
                throw Error(ErrorCode::ParseError, "unknown tolerance '" + k + "'");
    if (const auto it = doc.find("output"); it != doc.end())
        for (const auto& [k, v] : it->second) {
            if (k == "dir") out_dir = v;
            else if (k == "csv") csv = to_bool(k, v);
            else if (k == "mesh") mesh = to_bool(k, v);
            else if (k == "summary") summary = to_bool(k, v);
            else throw Error(ErrorCode::ParseError, "unknown output key '" + k + "'");
        }
    if (const auto it = doc.find("grid"); it != doc.end())
        for (const auto& [k, v] : it->second) {
            if (k == "nu") grid_u = to_count(k, v);
            else if (k == "nv") grid_v = to_count(k, v);
            else throw Error(ErrorCode::ParseError, "unknown grid key '" + k + "'");
        }
}

void RunConfig::set_grid(const std::string& nxm) {
    const auto x = nxm.find('x');
    if (x == std::string::npos) throw Error(ErrorCode::ParseError, "--grid expects NxM, got '" + nxm + "'");
    grid_u = to_count("--grid", nxm.substr(0, x));
    grid_v = to_count("--grid", nxm.substr(x + 1));
}

void RunConfig::set_tolerance(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw Error(ErrorCode::ParseError, "--tol expects NAME=VALUE, got '" + assignment + "'");
    const std::string name = assignment.substr(0, eq);
    if (!tol.set(name, io::to_number(name, assignment.substr(eq + 1))))
        throw Error(ErrorCode::ParseError, "unknown tolerance '" + name + "'");
}

LoadedSurface load_surface(const SurfaceSpec& spec, const RunConfig& cfg) {
    if (spec.kind == "builtin") {
        std::map<std::string, double> params;
        for (const auto& [k, v] : spec.params)
            if (k != "name") params[k] = io::to_number(k, v);
        return {builtin_surface(spec.text("name"), params), std::nullopt, 0, 0};
    }
    if (spec.kind == "rotational-ode") {
        const double alpha = spec.number("alpha"), beta = spec.number("beta");
        MeridianProfile p = solve_minimal_profile(alpha, beta, spec.number("f0"), spec.number("g0"),
                                                  spec.number("theta0"), spec.number("length"),
                                                  spec.number("h_u", 1e-3), cfg.tol);
        ParametricSurface s = surface_from_profile(p, alpha, beta, cfg.tol);
        return {std::move(s), std::move(p), alpha, beta};
    }
    if (spec.kind == "rotational-profile") {
        const double alpha = spec.number("alpha"), beta = spec.number("beta");
        MeridianProfile p = io::read_profile(spec.file("file"));
        if (p.form() == ProfileForm::AB) {
            const GeneratingCurve c = make_generating_curve(spec.number("a"), spec.number("b"), alpha, beta);
            p = p.to_fg(c);
        }
        ParametricSurface s = surface_from_profile(p, alpha, beta, cfg.tol);
        return {std::move(s), std::move(p), alpha, beta};
    }
    throw Error(ErrorCode::ParseError, "surface kind '" + spec.kind + "' does not describe a chart");
}

Grid2 default_grid(const ParametricSurface& s, const RunConfig& cfg) {
    const Domain& d = s.domain();
    return {Axis::spanning(d.u_min, d.u_max, cfg.grid_u.value_or(201)),
            Axis::spanning(d.v_min, d.v_max, cfg.grid_v.value_or(128))};
}

namespace {

void histogram_lines(Summary& s, const AnalysisSweep& sweep) {
    for (auto c : {PointClass::Flat, PointClass::MinimalSuperConformal, PointClass::MinimalGeneralType,
                   PointClass::NonMinimal})
        s.line(std::string("class ") + std::string(to_string(c)), sweep.count(c));
}

/// mu, nu along the meridian of a rotational surface (they do not depend on v).
std::pair<ScalarProfile, ScalarProfile> meridian_invariants(const ParametricSurface& s, const Axis& u,
                                                            const Tolerances& tol) {
    const double v0 = s.domain().v_min + 0.3 * s.domain().v_extent();
    ScalarProfile mu{u, {}}, nu{u, {}};
    for (std::size_t i = 0; i < u.count; ++i) {
        const CanonicalFrameData cf = geometric_frame(s, u.at(i), v0, tol);
        mu.values.push_back(cf.mu);
        nu.values.push_back(cf.nu);
    }
    return {mu, nu};
}

}  // namespace

int cmd_analyze(const SurfaceSpec& spec, const RunConfig& cfg, std::ostream& out) {
    const LoadedSurface ls = load_surface(spec, cfg);
    const Grid2 grid = default_grid(ls.surface, cfg);
    const AnalysisSweep sweep = analyze_grid(ls.surface, grid, cfg.tol);
    if (cfg.csv) io::write_invariants(cfg.out_dir / "invariants.csv", sweep);
    double min_raw = 0, min_norm = 0, sc_norm = 0, max_K = -1e300;
    for (const auto& inv : sweep.invariants.values()) {
        min_raw = std::max(min_raw, std::abs(inv.kappa * inv.kappa - inv.k));
        min_norm = std::max(min_norm, minimality_defect(inv));
        sc_norm = std::max(sc_norm, superconformal_defect(inv));
        max_K = std::max(max_K, inv.K);
    }
    Summary s;
    s.line("command", "analyze").line("grid", std::to_string(grid.u.count) + "x" + std::to_string(grid.v.count));
    histogram_lines(s, sweep);
    s.num("max |kappa^2 - k|", min_raw).num("max minimality defect", min_norm);
    s.num("max superconformality defect", sc_norm).num("max K", max_K);
    finish(s, cfg, out);
    return Ok;
}

int cmd_classify(const SurfaceSpec& spec, const RunConfig& cfg, std::ostream& out) {
    const LoadedSurface ls = load_surface(spec, cfg);
    const Grid2 grid = default_grid(ls.surface, cfg);
    const AnalysisSweep sweep = analyze_grid(ls.surface, grid, cfg.tol);
    if (cfg.csv) {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < grid.u.count; ++i)
            for (std::size_t j = 0; j < grid.v.count; ++j)
                rows.push_back({fmt(grid.u.at(i)), fmt(grid.v.at(j)), std::string(to_string(sweep.classes(i, j)))});
        io::write_csv(cfg.out_dir / "classes.csv", {"u", "v", "class"}, rows);
    }
    Summary s;
    s.line("command", "classify");
    histogram_lines(s, sweep);
    finish(s, cfg, out);
    return Ok;
}

int cmd_reconstruct(const SurfaceSpec& spec, const RunConfig& cfg, std::ostream& out) {
    const Frame4 initial = Frame4::from_matrix(Mat4::identity());
    ReconstructionResult r;
    if (spec.kind == "invariant-field") {
        const io::MuNuField f = io::read_invariant_field(spec.file("file"));
        r = reconstruct_from_invariants(f.mu, f.nu, initial, Vec4{}, cfg.tol);
    } else if (spec.kind == "invariant-profile") {
        const io::MuNuProfile p = io::read_invariant_profile(spec.file("file"));
        const std::size_t nv = spec.has("nv") ? to_count("nv", spec.text("nv")) : cfg.grid_v.value_or(64);
        const Axis v = Axis::spanning(spec.number("v_min", 0.0), spec.number("v_max", 1.0), nv);
        r = reconstruct_gamma1_zero(p.mu, p.nu, v, initial, Vec4{}, cfg.tol);
    } else {
        throw Error(ErrorCode::ParseError, "reconstruct needs an invariant-field or invariant-profile spec");
    }
    if (cfg.mesh) io::write_mesh(cfg.out_dir, "reconstruction", r.surface);
    Summary s;
    s.line("command", "reconstruct");
    s.line("grid", std::to_string(r.grid.u.count) + "x" + std::to_string(r.grid.v.count));
    s.num("compatibility residual", r.compatibility_residual);
    s.num("integrability defect", r.integrability_defect);
    s.num("orthonormality drift", r.orthonormality_defect);
    s.num("path defect", r.path_defect);
    s.num("closure defect", r.closure_defect);
    s.num("reanalysis minimality defect", r.reanalysis_minimality);
    s.line("reanalysis general type", r.reanalysis_general_type ? "yes" : "no");
    s.line("drift exceeded", r.drift_exceeded ? "yes" : "no");
    finish(s, cfg, out);
    return r.drift_exceeded ? Tolerance : Ok;
}

int cmd_rotational(const SurfaceSpec& spec, const RunConfig& cfg, std::ostream& out) {
    if (spec.kind != "rotational-ode" && spec.kind != "rotational-profile")
        throw Error(ErrorCode::ParseError, "rotational needs a rotational-ode or rotational-profile spec");
    const LoadedSurface ls = load_surface(spec, cfg);
    const MeridianProfile& p = *ls.profile;
    double residual = 0, speed = 0;
    for (const auto& j : p.nodes()) {
        residual = std::max(residual, std::abs(minimality_residual(j, ls.alpha, ls.beta)));
        speed = std::max(speed, std::abs(j.fp * j.fp + j.gp * j.gp - 1.0));
    }
    const Grid2 grid = default_grid(ls.surface, cfg);
    const AnalysisSweep sweep = analyze_grid(ls.surface, grid, cfg.tol);

    // Meridian invariants on the interior nodes, where the frame connection
    // can be differenced on both sides.
    const Axis u = grid.u.interior();
    const auto [mu, nu] = meridian_invariants(ls.surface, u, cfg.tol);
    double g_min = 1e300, g_max = 0;
    for (std::size_t i = 0; i < u.count; ++i) {
        const FundamentalData fd = fundamental_forms(ls.surface, u.at(i), grid.v.at(0), cfg.tol);
        const double c = fd.G * std::sqrt(std::abs(mu[i] * mu[i] - nu[i] * nu[i]));
        g_min = std::min(g_min, c);
        g_max = std::max(g_max, c);
    }
    if (cfg.csv) {
        io::write_profile(cfg.out_dir / "profile.csv", p);
        io::write_invariants(cfg.out_dir / "invariants.csv", sweep);
        io::write_invariant_profile(cfg.out_dir / "invariant_profile.csv", mu, nu);
    }
    if (cfg.mesh) io::write_mesh(cfg.out_dir, "surface", ls.surface.sample(grid));

    std::vector<double> u0, v0;
    for (double t : {0.2, 0.35, 0.5, 0.65, 0.8}) {
        u0.push_back(grid.u.start + t * (grid.u.end() - grid.u.start));
        v0.push_back(grid.v.start + t * (grid.v.end() - grid.v.start));
    }
    const CurveFamilyReport fam = verify_prop75(ls.surface, u0, v0, cfg.tol);

    Summary s;
    s.line("command", "rotational");
    s.line("profile nodes", p.nodes().size()).line("profile truncated", p.truncated ? "yes" : "no");
    if (!p.note.empty()) s.line("profile note", p.note);
    s.num("max profile minimality residual", residual).num("max |f'^2 + g'^2 - 1|", speed);
    histogram_lines(s, sweep);
    s.num("G sqrt|mu^2 - nu^2| min", g_min).num("G sqrt|mu^2 - nu^2| max", g_max);
    s.num("v-curve curvature variation", fam.v_curvature_variation);
    s.num("v-curve kappa error", fam.kappa_v_error).num("v-curve tau error", fam.tau_v_error);
    s.num("v-curve sigma error", fam.sigma_v_error).num("v-curve span distance", fam.v_span_distance);
    s.num("u-curve curvature error", fam.u_curvature_error).num("u-curve torsion", fam.u_torsion);
    s.num("u-curve span distance", fam.u_span_distance);
    s.line("curve family checks", fam.passed() ? "pass" : "fail");
    finish(s, cfg, out);
    return fam.passed() ? Ok : Tolerance;
}

int cmd_residuals(const SurfaceSpec& spec, const RunConfig& cfg, std::ostream& out) {
    Summary s;
    s.line("command", "residuals");
    double worst = 0;
    auto profile_case = [&](const ScalarProfile& mu, const ScalarProfile& nu) {
        const ProfileResiduals r = ode_residuals(mu, nu, cfg.tol);
        if (cfg.csv) io::write_residuals(cfg.out_dir / "residuals.csv", r);
        worst = r.max_abs();
        s.line("system", "ode").num("max residual", worst);
    };
    auto field_case = [&](const ScalarField& mu, const ScalarField& nu) {
        const FieldResiduals r = pde_residuals_munu(mu, nu, cfg.tol);
        if (cfg.csv) io::write_residuals(cfg.out_dir / "residuals.csv", r);
        worst = r.max_abs();
        s.line("system", "pde").num("max residual", worst);
    };
    if (spec.kind == "invariant-field") {
        const io::MuNuField f = io::read_invariant_field(spec.file("file"));
        field_case(f.mu, f.nu);
    } else if (spec.kind == "invariant-profile") {
        const io::MuNuProfile p = io::read_invariant_profile(spec.file("file"));
        profile_case(p.mu, p.nu);
    } else {
        const LoadedSurface ls = load_surface(spec, cfg);
        const Grid2 grid = default_grid(ls.surface, cfg);
        if (ls.profile) {
            const auto [mu, nu] = meridian_invariants(ls.surface, grid.u.interior(), cfg.tol);
            profile_case(mu, nu);
        } else {
            const InvariantField field = frame_invariants_field(ls.surface, grid, cfg.tol);
            const CanonicalReport rep = check_canonical_parameters(field, CanonicalVariant::StronglyRegular, cfg.tol);
            s.num("canonical parameter defect", rep.max_defect);
            if (cfg.csv) io::write_invariant_field(cfg.out_dir / "invariant_field.csv", field);
            field_case(field.mu(), field.nu());
        }
    }
    s.num("threshold (admit_tol)", cfg.tol.admit_tol);
    finish(s, cfg, out);
    return worst < cfg.tol.admit_tol ? Ok : Tolerance;
}

int cmd_export(const SurfaceSpec& spec, const RunConfig& cfg, std::ostream& out) {
    const LoadedSurface ls = load_surface(spec, cfg);
    const Grid2 grid = default_grid(ls.surface, cfg);
    const io::MeshInfo info = io::write_mesh(cfg.out_dir, "surface", ls.surface.sample(grid));
    Summary s;
    s.line("command", "export").line("vertices", info.vertices).line("quads", info.quads);
    s.line("seam welded in u", info.welded_u ? "yes" : "no");
    s.line("seam welded in v", info.welded_v ? "yes" : "no");
    finish(s, cfg, out);
    return Ok;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Invariants, canonical frames and reconstruction of surfaces in R^4"};
    app.require_subcommand(1);
    std::string config_path, out_dir, grid;
    std::vector<std::string> tols;
    app.add_option("--config", config_path, "run configuration file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--grid", grid, "sample lattice NxM");
    app.add_option("--tol", tols, "tolerance override NAME=VALUE")->take_all()->allow_extra_args(false);

    using Handler = int (*)(const SurfaceSpec&, const RunConfig&, std::ostream&);
    const std::pair<const char*, Handler> commands[] = {
        {"analyze", cmd_analyze},         {"classify", cmd_classify}, {"reconstruct", cmd_reconstruct},
        {"rotational", cmd_rotational},   {"residuals", cmd_residuals}, {"export", cmd_export}};
    std::string spec_path;
    Handler chosen = nullptr;
    for (const auto& [name, handler] : commands) {
        CLI::App* sub = app.add_subcommand(name, std::string(name) + " a surface spec");
        sub->add_option("spec", spec_path, "surface spec file")->required();
        sub->fallthrough();
        sub->callback([&chosen, h = handler] { chosen = h; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return Ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return Parse;
    }
    try {
        const io::Document spec_doc = io::load_document(spec_path);
        RunConfig cfg;
        cfg.apply(spec_doc);
        if (!config_path.empty()) cfg.apply(io::load_document(config_path));
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!grid.empty()) cfg.set_grid(grid);
        for (const auto& t : tols) cfg.set_tolerance(t);
        const SurfaceSpec spec =
            SurfaceSpec::from_document(spec_doc, io::fs::path(spec_path).parent_path());
        return chosen(spec, cfg, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return Failure;
    }
}

}  // namespace surf4::cli
