#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "surf4/error.hpp"
#include "surf4/io.hpp"

namespace surf4::cli {

/// Process exit codes shared by every subcommand.
enum Exit : int { Ok = 0, Failure = 1, Parse = 2, DegenerateInput = 3, Tolerance = 4, Compatibility = 5 };

int exit_code(ErrorCode code);

/// [surface] section of a spec file. kind is one of builtin,
/// rotational-profile, rotational-ode, invariant-field, invariant-profile.
struct SurfaceSpec {
    std::string kind;
    io::Section params;
    io::fs::path base_dir;  // relative file paths resolve against this

    static SurfaceSpec from_document(const io::Document& doc, const io::fs::path& base_dir);
    bool has(const std::string& key) const { return params.count(key) != 0; }
    double number(const std::string& key) const;
    double number(const std::string& key, double fallback) const;
    std::string text(const std::string& key) const;
    io::fs::path file(const std::string& key) const;
};

struct RunConfig {
    Tolerances tol;
    io::fs::path out_dir = "out";
    bool csv = true, mesh = true, summary = true;
    std::optional<std::size_t> grid_u, grid_v;

    /// Reads [tolerances], [output] and [grid]; later calls override earlier ones.
    void apply(const io::Document& doc);
    /// "201x128".
    void set_grid(const std::string& nxm);
    /// "NAME=VALUE".
    void set_tolerance(const std::string& assignment);
};

/// A chart built from a surface spec, plus the meridian for rotational kinds.
struct LoadedSurface {
    ParametricSurface surface;
    std::optional<MeridianProfile> profile;
    double alpha = 0, beta = 0;
};

LoadedSurface load_surface(const SurfaceSpec& spec, const RunConfig& cfg);
/// Lattice over the chart domain, default 201 x 128 unless overridden.
Grid2 default_grid(const ParametricSurface& s, const RunConfig& cfg);

int cmd_analyze(const SurfaceSpec& spec, const RunConfig& cfg, std::ostream& out);
int cmd_classify(const SurfaceSpec& spec, const RunConfig& cfg, std::ostream& out);
int cmd_reconstruct(const SurfaceSpec& spec, const RunConfig& cfg, std::ostream& out);
int cmd_rotational(const SurfaceSpec& spec, const RunConfig& cfg, std::ostream& out);
int cmd_residuals(const SurfaceSpec& spec, const RunConfig& cfg, std::ostream& out);
int cmd_export(const SurfaceSpec& spec, const RunConfig& cfg, std::ostream& out);

/// Parses arguments and dispatches; errors are reported on `err` and mapped
/// to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace surf4::cli
