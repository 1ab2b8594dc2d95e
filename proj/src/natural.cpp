#include "surf4/natural.hpp"

#include <algorithm>

#include "surf4/error.hpp"

namespace surf4 {

double FieldResiduals::max_abs() const {
    return std::max(max_abs_finite(r1.values()), max_abs_finite(r2.values()));
}

double ProfileResiduals::max_abs() const {
    return std::max(max_abs_finite(r1.values), max_abs_finite(r2.values));
}

ScalarField laplacian(const ScalarField& f) {
    const Grid2& g = f.grid();
    if (g.u.count < 3 || g.v.count < 3)
        throw Error(ErrorCode::GridTooSmall, "Laplacian needs a 3x3 lattice");
    const double hu2 = g.u.step * g.u.step, hv2 = g.v.step * g.v.step;
    ScalarField out(g.interior());
    for (std::size_t i = 1; i + 1 < g.u.count; ++i)
        for (std::size_t j = 1; j + 1 < g.v.count; ++j)
            out(i - 1, j - 1) = (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) / hu2 +
                                (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) / hv2;
    return out;
}

namespace {

// Logs of |mu^2-nu^2| and |(mu+nu)/(mu-nu)| after checking that
// mu^2-nu^2 keeps one sign and stays away from zero.
struct LogPair {
    std::vector<double> gap, l1, l2;
};

LogPair log_pair(std::span<const double> mu, std::span<const double> nu, double tol_gen,
                 ErrorCode sign_error) {
    if (mu.size() != nu.size())
        throw Error(ErrorCode::PreconditionFailed, "mu and nu sampled on different lattices");
    LogPair out;
    int sign = 0;
    for (std::size_t n = 0; n < mu.size(); ++n) {
        const double m = mu[n], v = nu[n];
        const double d = m * m - v * v;
        if (!std::isfinite(d) || std::abs(d) <= tol_gen)
            throw Error(ErrorCode::DegenerateInvariants, "|mu^2 - nu^2| at or below tol_gen");
        const int s = d > 0 ? 1 : -1;
        if (sign != 0 && s != sign)
            throw Error(sign_error, "mu^2 - nu^2 changes sign; logarithm branch breaks");
        sign = s;
        out.gap.push_back(std::abs(d));
        out.l1.push_back(std::log(std::abs(d)));
        out.l2.push_back(std::log(std::abs((m + v) / (m - v))));
    }
    return out;
}

ScalarField on_grid(const Grid2& g, std::vector<double> values) {
    ScalarField f(g);
    std::copy(values.begin(), values.end(), f.values().begin());
    return f;
}

}  // namespace

FieldResiduals pde_residuals_munu(const ScalarField& mu, const ScalarField& nu,
                                  const Tolerances& tol) {
    const Grid2& g = mu.grid();
    const LogPair lp = log_pair(mu.values(), nu.values(), tol.tol_gen, ErrorCode::DomainError);
    const ScalarField lap1 = laplacian(on_grid(g, lp.l1));
    const ScalarField lap2 = laplacian(on_grid(g, lp.l2));
    FieldResiduals r{ScalarField(g.interior()), ScalarField(g.interior())};
    for (std::size_t i = 1; i + 1 < g.u.count; ++i)
        for (std::size_t j = 1; j + 1 < g.v.count; ++j) {
            const double m = mu(i, j), v = nu(i, j);
            const double root = std::sqrt(lp.gap[g.index(i, j)]);
            r.r1(i - 1, j - 1) = 0.25 * root * lap1(i - 1, j - 1) + v * v + m * m;
            r.r2(i - 1, j - 1) = 0.5 * root * lap2(i - 1, j - 1) + 2.0 * v * m;
        }
    return r;
}

FieldResiduals pde_residuals_Kkappa(const ScalarField& K, const ScalarField& kappa,
                                    const Tolerances& tol) {
    const Grid2& g = K.grid();
    std::vector<double> l1(g.size()), l2(g.size()), q(g.size());
    int sign_minus = 0, sign_plus = 0;
    for (std::size_t n = 0; n < g.size(); ++n) {
        const double k = K.values()[n], c = kappa.values()[n];
        const double d = k * k - c * c;
        if (!std::isfinite(d) || d <= tol.tol_gen)
            throw Error(ErrorCode::DegenerateInvariants, "K^2 - kappa^2 at or below tol_gen");
        const int sm = k - c > 0 ? 1 : -1, sp = k + c > 0 ? 1 : -1;
        if ((sign_minus != 0 && sm != sign_minus) || (sign_plus != 0 && sp != sign_plus))
            throw Error(ErrorCode::DomainError, "K -/+ kappa changes sign; logarithm branch breaks");
        sign_minus = sm;
        sign_plus = sp;
        q[n] = std::sqrt(std::sqrt(d));
        l1[n] = std::log(d);
        l2[n] = std::log((k - c) / (k + c));
    }
    const ScalarField lap1 = laplacian(on_grid(g, l1));
    const ScalarField lap2 = laplacian(on_grid(g, l2));
    FieldResiduals r{ScalarField(g.interior()), ScalarField(g.interior())};
    for (std::size_t i = 1; i + 1 < g.u.count; ++i)
        for (std::size_t j = 1; j + 1 < g.v.count; ++j) {
            const double root4 = q[g.index(i, j)];
            r.r1(i - 1, j - 1) = 0.125 * root4 * lap1(i - 1, j - 1) - K(i, j);
            r.r2(i - 1, j - 1) = 0.25 * root4 * lap2(i - 1, j - 1) + kappa(i, j);
        }
    return r;
}

ProfileResiduals ode_residuals(const ScalarProfile& mu, const ScalarProfile& nu,
                               const Tolerances& tol) {
    const std::size_t n = mu.size();
    if (n < 3) throw Error(ErrorCode::GridTooSmall, "ODE residuals need 3 samples");
    const LogPair lp = log_pair(mu.values, nu.values, tol.tol_gen, ErrorCode::BranchBreak);
    const double h = mu.u.step;
    ProfileResiduals r{{mu.u.interior(), {}}, {mu.u.interior(), {}}};
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double l1p = (lp.l1[i + 1] - lp.l1[i - 1]) / (2.0 * h);
        const double l1pp = (lp.l1[i + 1] - 2.0 * lp.l1[i] + lp.l1[i - 1]) / (h * h);
        const double l2p = (lp.l2[i + 1] - lp.l2[i - 1]) / (2.0 * h);
        const double l2pp = (lp.l2[i + 1] - 2.0 * lp.l2[i] + lp.l2[i - 1]) / (h * h);
        const double m = mu[i], v = nu[i];
        r.r1.values.push_back(0.25 * l1pp - l1p * l1p / 16.0 + v * v + m * m);
        r.r2.values.push_back(0.5 * l2pp - 0.125 * l1p * l2p + 2.0 * v * m);
    }
    return r;
}

}  // namespace surf4
