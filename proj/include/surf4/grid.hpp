#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace surf4 {

/// Uniform one-dimensional lattice start, start + step, ..., start + (count-1) step.
struct Axis {
    double start = 0.0;
    double step = 1.0;
    std::size_t count = 0;

    static Axis spanning(double lo, double hi, std::size_t count);

    double at(std::size_t i) const { return start + step * static_cast<double>(i); }
    double end() const { return at(count == 0 ? 0 : count - 1); }
    /// The same lattice without its first and last node.
    Axis interior() const { return {start + step, step, count >= 2 ? count - 2 : 0}; }
};

/// Rectangular (u, v) lattice; index (i, j) is u-major.
struct Grid2 {
    Axis u, v;

    std::size_t size() const { return u.count * v.count; }
    std::size_t index(std::size_t i, std::size_t j) const { return i * v.count + j; }
    Grid2 interior() const { return {u.interior(), v.interior()}; }
};

template <class T>
class Field2 {
public:
    Field2() = default;
    explicit Field2(Grid2 grid, T fill = T{}) : grid_(grid), data_(grid.size(), fill) {}

    const Grid2& grid() const { return grid_; }
    std::size_t nu() const { return grid_.u.count; }
    std::size_t nv() const { return grid_.v.count; }

    T& operator()(std::size_t i, std::size_t j) { return data_[grid_.index(i, j)]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[grid_.index(i, j)]; }

    std::span<T> values() { return data_; }
    std::span<const T> values() const { return data_; }

private:
    Grid2 grid_{};
    std::vector<T> data_;
};

/// Real values on a (u, v) lattice, e.g. mu(u, v), K(u, v).
using ScalarField = Field2<double>;

/// Real values on a u-lattice, e.g. mu(u), nu(u).
struct ScalarProfile {
    Axis u;
    std::vector<double> values;

    double operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }
};

double max_abs_finite(std::span<const double> values);
double mean_abs_finite(std::span<const double> values);

namespace stencil {

/// Weights for value, first and second derivative of the Lagrange
/// interpolant through nodes 0, 1, ..., N-1 (unit spacing) at position t.
template <std::size_t N>
struct LagrangeWeights {
    std::array<double, N> value{}, d1{}, d2{};
};

template <std::size_t N>
LagrangeWeights<N> lagrange_weights(double t) {
    LagrangeWeights<N> w;
    for (std::size_t k = 0; k < N; ++k) {
        double denom = 1.0;
        for (std::size_t m = 0; m < N; ++m)
            if (m != k) denom *= static_cast<double>(k) - static_cast<double>(m);
        // Product of (t - m) over m != k, with its first two derivatives.
        double p = 1.0, dp = 0.0, ddp = 0.0;
        for (std::size_t m = 0; m < N; ++m) {
            if (m == k) continue;
            const double f = t - static_cast<double>(m);
            ddp = ddp * f + 2.0 * dp;
            dp = dp * f + p;
            p = p * f;
        }
        w.value[k] = p / denom;
        w.d1[k] = dp / denom;
        w.d2[k] = ddp / denom;
    }
    return w;
}

/// First derivative by second-order central differences (one-sided second
/// order at the ends). Requires at least 3 samples.
std::vector<double> derivative2(std::span<const double> f, double h);
/// First derivative by fourth-order differences (five-point central inside,
/// one-sided five-point near the ends). Requires at least 5 samples.
std::vector<double> derivative4(std::span<const double> f, double h);
/// Cubic (four-point) interpolation at the midpoint between samples i and i+1.
double midpoint_cubic(std::span<const double> f, std::size_t i);

}  // namespace stencil

}  // namespace surf4
