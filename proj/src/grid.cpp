#include "surf4/grid.hpp"

#include <algorithm>

#include "surf4/error.hpp"

namespace surf4 {

Axis Axis::spanning(double lo, double hi, std::size_t count) {
    if (count < 2) return {lo, 1.0, count};
    return {lo, (hi - lo) / static_cast<double>(count - 1), count};
}

double max_abs_finite(std::span<const double> values) {
    double r = 0.0;
    for (double x : values)
        if (std::isfinite(x)) r = std::max(r, std::abs(x));
    return r;
}

double mean_abs_finite(std::span<const double> values) {
    double s = 0.0;
    std::size_t n = 0;
    for (double x : values)
        if (std::isfinite(x)) {
            s += std::abs(x);
            ++n;
        }
    return n == 0 ? 0.0 : s / static_cast<double>(n);
}

namespace stencil {

std::vector<double> derivative2(std::span<const double> f, double h) {
    const std::size_t n = f.size();
    if (n < 3) throw Error(ErrorCode::GridTooSmall, "derivative2 needs at least 3 samples");
    std::vector<double> d(n);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return d;
}

std::vector<double> derivative4(std::span<const double> f, double h) {
    const std::size_t n = f.size();
    if (n < 5) throw Error(ErrorCode::GridTooSmall, "derivative4 needs at least 5 samples");
    std::vector<double> d(n);
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    // Five-point one-sided and off-centre formulas.
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] +
                3.0 * f[n - 5]) /
               (12.0 * h);
    d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] -
                f[n - 5]) /
               (12.0 * h);
    return d;
}

double midpoint_cubic(std::span<const double> f, std::size_t i) {
    const std::size_t n = f.size();
    if (n < 4) {
        return 0.5 * (f[i] + f[i + 1]);
    }
    // Window of four nodes containing [i, i+1], centred where possible.
    std::size_t first = i == 0 ? 0 : i - 1;
    first = std::min(first, n - 4);
    const double t = static_cast<double>(i - first) + 0.5;
    const auto w = lagrange_weights<4>(t);
    double s = 0.0;
    for (std::size_t k = 0; k < 4; ++k) s += w.value[k] * f[first + k];
    return s;
}

}  // namespace stencil
}  // namespace surf4
