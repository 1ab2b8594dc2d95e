#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "surf4/analysis.hpp"
#include "surf4/canonical.hpp"
#include "surf4/natural.hpp"
#include "surf4/rotational.hpp"

namespace surf4::io {

namespace fs = std::filesystem;

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Throws ParseError when the column is missing.
    std::size_t column(const std::string& name) const;
};

/// Numeric CSV with a header row. Throws IOError when the file cannot be
/// read, ParseError on a malformed row.
CsvTable read_csv(const fs::path& path);
void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);
void write_text(const fs::path& path, const std::string& text);

/// Flat key = value lines grouped under [section] headers; '#' and ';'
/// start comments. Keys before the first header go to section "".
using Section = std::map<std::string, std::string>;
using Document = std::map<std::string, Section>;
Document parse_document(const std::string& text);
Document load_document(const fs::path& path);
/// Throws ParseError when the value is not a complete number.
double to_number(const std::string& key, const std::string& value);

/// Header u,f,g or u,A,B.
void write_profile(const fs::path& path, const MeridianProfile& profile);
MeridianProfile read_profile(const fs::path& path);

/// Header u,v,E,F,G,L,M,N,k,kappa,K,class.
void write_invariants(const fs::path& path, const AnalysisSweep& sweep);

/// Header u,v,nu,mu,gamma1,gamma2,beta1,beta2,E,G.
void write_invariant_field(const fs::path& path, const InvariantField& field);
/// mu and nu on a lattice from a CSV with at least the columns u, v, mu, nu
/// (rows in u-major order on a uniform lattice).
struct MuNuField {
    ScalarField mu, nu;
};
MuNuField read_invariant_field(const fs::path& path);

/// Header u,mu,nu.
void write_invariant_profile(const fs::path& path, const ScalarProfile& mu,
                             const ScalarProfile& nu);
struct MuNuProfile {
    ScalarProfile mu, nu;
};
MuNuProfile read_invariant_profile(const fs::path& path);

/// Header u,v,r1,r2 (or u,r1,r2 for profiles).
void write_residuals(const fs::path& path, const FieldResiduals& r);
void write_residuals(const fs::path& path, const ProfileResiduals& r);

struct MeshInfo {
    std::size_t vertices = 0, quads = 0;
    bool welded_u = false, welded_v = false;
};

/// Writes <stem>.mesh4 (four coordinates per vertex, 0-based quads) and the
/// projections <stem>_xyz.obj, <stem>_xyw.obj, <stem>_xzw.obj. A first and
/// last lattice column (or row) agreeing within 1e-9 are merged. Throws
/// PreconditionFailed for a lattice with fewer than 2 nodes per axis, before
/// any file is created.
MeshInfo write_mesh(const fs::path& dir, const std::string& stem, const Field2<Vec4>& points);

}  // namespace surf4::io
