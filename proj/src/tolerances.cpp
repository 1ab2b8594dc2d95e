#include "surf4/tolerances.hpp"

#include <array>
#include <utility>

#include "surf4/error.hpp"

namespace surf4 {
namespace {

using Member = double Tolerances::*;

constexpr std::array<std::pair<std::string_view, Member>, 15> kTable{{
    {"tol_ortho", &Tolerances::tol_ortho},
    {"tol_rank", &Tolerances::tol_rank},
    {"tol_reg", &Tolerances::tol_reg},
    {"tol_decomp", &Tolerances::tol_decomp},
    {"tol_flat", &Tolerances::tol_flat},
    {"tol_min", &Tolerances::tol_min},
    {"tol_sc", &Tolerances::tol_sc},
    {"tol_gen", &Tolerances::tol_gen},
    {"tol_canon", &Tolerances::tol_canon},
    {"jump_tol", &Tolerances::jump_tol},
    {"lemma_tol", &Tolerances::lemma_tol},
    {"reparam_tol", &Tolerances::reparam_tol},
    {"admit_tol", &Tolerances::admit_tol},
    {"drift_tol", &Tolerances::drift_tol},
    {"fd_step", &Tolerances::fd_step},
}};

}  // namespace

bool Tolerances::set(std::string_view name, double value) {
    for (const auto& [key, member] : kTable) {
        if (key != name) continue;
        if (!(value > 0.0))
            throw Error(ErrorCode::ParseError,
                        "tolerance " + std::string(name) + " must be positive");
        this->*member = value;
        return true;
    }
    return false;
}

double Tolerances::get(std::string_view name) const {
    for (const auto& [key, member] : kTable)
        if (key == name) return this->*member;
    throw Error(ErrorCode::ParseError, "unknown tolerance " + std::string(name));
}

std::vector<std::string> Tolerances::names() {
    std::vector<std::string> out;
    for (const auto& entry : kTable) out.emplace_back(entry.first);
    return out;
}

}  // namespace surf4
