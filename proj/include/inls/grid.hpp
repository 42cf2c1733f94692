#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace inls {

using Complex = std::complex<double>;

/// Periodic box [-L, L)^d sampled with n points per axis.
struct GridSpec {
    int dimension = 1;
    int points_per_axis = 8;
    double half_length = 16.0;

    GridSpec() = default;
    GridSpec(int dim, int n, double L) : dimension(dim), points_per_axis(n), half_length(L) {
        if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
        if (n < 8 || n % 2 != 0) throw std::invalid_argument("points_per_axis must be even and >= 8");
        if (!(L > 0)) throw std::invalid_argument("half_length must be positive");
    }

    double spacing() const { return 2.0 * half_length / points_per_axis; }
    double volume() const { return std::pow(2.0 * half_length, dimension); }
    std::size_t total_points() const {
        std::size_t n = 1;
        for (int a = 0; a < dimension; ++a) n *= static_cast<std::size_t>(points_per_axis);
        return n;
    }

    /// Grid point along one axis, index in [0, n).
    double coordinate(int i) const { return -half_length + i * spacing(); }

    /// Signed dual index for array index i (wraps to [-n/2, n/2)).
    int freq_index(int i) const { return i < points_per_axis / 2 ? i : i - points_per_axis; }

    /// Dual frequency xi_k = pi k / L for array index i.
    double frequency(int i) const {
        return M_PI * freq_index(i) / half_length;
    }

    bool operator==(const GridSpec& o) const {
        return dimension == o.dimension && points_per_axis == o.points_per_axis &&
               half_length == o.half_length;
    }
};

/// Complex-valued function sampled on a GridSpec, row-major axis order.
struct ComplexField {
    GridSpec grid;
    std::vector<Complex> values;

    ComplexField() = default;
    explicit ComplexField(const GridSpec& g) : grid(g), values(g.total_points()) {}
    ComplexField(const GridSpec& g, std::vector<Complex> v) : grid(g), values(std::move(v)) {
        if (values.size() != g.total_points())
            throw std::invalid_argument("field size does not match grid");
    }

    std::size_t size() const { return values.size(); }

    bool finite() const {
        for (const auto& z : values)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    double l2_norm() const {
        double s = 0;
        for (const auto& z : values) s += std::norm(z);
        return std::sqrt(s * std::pow(grid.spacing(), grid.dimension));
    }

    double sup_norm() const {
        double m = 0;
        for (const auto& z : values) m = std::max(m, std::abs(z));
        return m;
    }
};

/// Decodes a flat index into per-axis indices (row-major: axis 0 slowest).
inline void unflatten(const GridSpec& g, std::size_t flat, int* idx) {
    for (int a = g.dimension - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % g.points_per_axis);
        flat /= g.points_per_axis;
    }
}

/// Euclidean |x| of the grid point at flat index.
inline double radius_at(const GridSpec& g, std::size_t flat) {
    double r2 = 0;
    for (int a = g.dimension - 1; a >= 0; --a) {
        const int i = static_cast<int>(flat % g.points_per_axis);
        flat /= g.points_per_axis;
        const double x = g.coordinate(i);
        r2 += x * x;
    }
    return std::sqrt(r2);
}

/// |xi|^2 of the dual grid point at flat index.
inline double freq_sq_at(const GridSpec& g, std::size_t flat) {
    double k2 = 0;
    for (int a = g.dimension - 1; a >= 0; --a) {
        const int i = static_cast<int>(flat % g.points_per_axis);
        flat /= g.points_per_axis;
        const double xi = g.frequency(i);
        k2 += xi * xi;
    }
    return k2;
}

inline ComplexField operator+(const ComplexField& a, const ComplexField& b) {
    ComplexField out(a.grid);
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = a.values[i] + b.values[i];
    return out;
}

inline ComplexField operator-(const ComplexField& a, const ComplexField& b) {
    ComplexField out(a.grid);
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = a.values[i] - b.values[i];
    return out;
}

inline ComplexField operator*(Complex c, const ComplexField& f) {
    ComplexField out(f.grid);
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = c * f.values[i];
    return out;
}

}  // namespace inls
