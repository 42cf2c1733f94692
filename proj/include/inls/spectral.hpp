#pragma once

// Fourier-side operations on periodic box fields: the free propagator,
// fractional derivatives, Sobolev norms and spectral rescaling.
//
// Conventions: the continuum-consistent transform carries the Riemann weight,
//   fhat(xi_k) = h^d sum_x f(x) e^{-i xi_k . x},   xi_k = pi k / L,
// so that the discrete Plancherel sum (2L)^{-d} sum_k |fhat_k|^2 matches
// the continuum L2 integral. Multiplier application cancels the weight and
// the boundary phases, so it reduces to raw DFT / symbol / inverse DFT.

#include <cmath>
#include <functional>
#include <stdexcept>

#include "inls/fft.hpp"
#include "inls/grid.hpp"

namespace inls {

/// Diagonal Fourier-side operator; symbol indexed like the dual grid.
struct FourierMultiplier {
    GridSpec grid;
    std::vector<Complex> symbol;

    FourierMultiplier() = default;
    FourierMultiplier(const GridSpec& g, std::vector<Complex> s)
        : grid(g), symbol(std::move(s)) {
        if (symbol.size() != g.total_points())
            throw std::invalid_argument("symbol size does not match grid");
    }

    ComplexField apply(const ComplexField& f) const {
        if (!(f.grid == grid)) throw std::invalid_argument("grid mismatch");
        ComplexField out = f;
        detail::dft_forward(grid, out.values.data());
        const double inv_n = 1.0 / static_cast<double>(grid.total_points());
        for (std::size_t i = 0; i < out.size(); ++i) out.values[i] *= symbol[i] * inv_n;
        detail::dft_backward(grid, out.values.data());
        return out;
    }

    /// Pointwise product of symbols: applying the result equals applying both.
    FourierMultiplier compose(const FourierMultiplier& other) const {
        FourierMultiplier out(grid, symbol);
        for (std::size_t i = 0; i < symbol.size(); ++i) out.symbol[i] *= other.symbol[i];
        return out;
    }
};

inline FourierMultiplier make_multiplier(const GridSpec& g,
                                         const std::function<Complex(double /*|xi|^2*/)>& fn) {
    std::vector<Complex> sym(g.total_points());
    for (std::size_t i = 0; i < sym.size(); ++i) sym[i] = fn(freq_sq_at(g, i));
    return FourierMultiplier(g, std::move(sym));
}

/// e^{it Delta} f, the solution of the free equation i u_t + Delta u = 0.
/// Exactly unitary on the grid.
inline ComplexField free_propagate(const ComplexField& f, double t) {
    ComplexField out = f;
    detail::dft_forward(f.grid, out.values.data());
    const double inv_n = 1.0 / static_cast<double>(f.grid.total_points());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double k2 = freq_sq_at(f.grid, i);
        out.values[i] *= std::polar(inv_n, -t * k2);
    }
    detail::dft_backward(f.grid, out.values.data());
    return out;
}

/// |nabla|^s via the |xi|^s multiplier; the zero mode maps to 0 for s != 0.
inline ComplexField fractional_derivative(const ComplexField& f, double s) {
    if (s <= -f.grid.dimension) throw std::invalid_argument("s must exceed -d");
    if (s >= f.grid.dimension) throw std::invalid_argument("s must be below d");
    ComplexField out = f;
    detail::dft_forward(f.grid, out.values.data());
    const double inv_n = 1.0 / static_cast<double>(f.grid.total_points());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double k2 = freq_sq_at(f.grid, i);
        const double m = (k2 == 0.0 && s != 0.0) ? 0.0 : std::pow(k2, 0.5 * s);
        out.values[i] *= m * inv_n;
    }
    detail::dft_backward(f.grid, out.values.data());
    return out;
}

/// Homogeneous Sobolev seminorm; with homogeneous = false the inhomogeneous
/// norm is the l2 combination of the L2 and homogeneous parts.
inline double sobolev_norm(const ComplexField& f, double s, bool homogeneous = true) {
    if (s < 0) throw std::invalid_argument("sobolev_norm requires s >= 0");
    ComplexField hat = f;
    detail::dft_forward(f.grid, hat.values.data());
    const double hd = std::pow(f.grid.spacing(), f.grid.dimension);
    const double w = hd * hd / f.grid.volume();  // |h^d DFT|^2 (2L)^{-d}
    double hom = 0, l2 = 0;
    for (std::size_t i = 0; i < hat.size(); ++i) {
        const double k2 = freq_sq_at(f.grid, i);
        const double m = std::norm(hat.values[i]) * w;
        l2 += m;
        if (k2 > 0) hom += std::pow(k2, s) * m;
        else if (s == 0.0) hom += m;
    }
    if (homogeneous) return std::sqrt(hom);
    return std::sqrt(hom + l2);
}

/// lambda^{(2-alpha)/beta} f(lambda x) by trigonometric interpolation,
/// evaluated axis-by-axis. Requires lambda >= 1 so the rescaled support
/// stays inside the box.
inline ComplexField rescale_field(const ComplexField& f, double lambda, double alpha,
                                  double beta) {
    if (lambda < 1.0) throw std::invalid_argument("rescale_field requires lambda >= 1");
    const GridSpec& g = f.grid;
    const int n = g.points_per_axis;

    // spectral coefficients with the physical phase convention:
    // c[k] = h^d (-1)^{sum k_i} DFT[k]
    ComplexField hat = f;
    detail::dft_forward(g, hat.values.data());

    // per-axis evaluation matrix E[m][j] = e^{i xi_j lambda x_m} (-1)^{j}
    // (the sign folds the phase convention into the matrix)
    std::vector<Complex> E(static_cast<std::size_t>(n) * n);
    for (int m = 0; m < n; ++m) {
        const double x = g.coordinate(m);
        // points whose image lambda*x leaves the box would wrap around the
        // periodic extension; truncate them instead
        if (std::abs(lambda * x) > g.half_length) continue;
        for (int j = 0; j < n; ++j) {
            const double xi = g.frequency(j);
            const double sign = (g.freq_index(j) % 2 == 0) ? 1.0 : -1.0;
            E[static_cast<std::size_t>(m) * n + j] = std::polar(sign, xi * lambda * x);
        }
    }

    ComplexField work = hat;
    std::vector<Complex> line_in(n), line_out(n);
    const std::size_t total = g.total_points();
    for (int axis = 0; axis < g.dimension; ++axis) {
        std::size_t stride = 1;
        for (int a = axis + 1; a < g.dimension; ++a) stride *= n;
        const std::size_t block = stride * n;
        for (std::size_t base = 0; base < total; base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                for (int j = 0; j < n; ++j) line_in[j] = work.values[base + off + j * stride];
                for (int m = 0; m < n; ++m) {
                    Complex acc = 0;
                    const Complex* row = &E[static_cast<std::size_t>(m) * n];
                    for (int j = 0; j < n; ++j) acc += row[j] * line_in[j];
                    line_out[m] = acc;
                }
                for (int m = 0; m < n; ++m) work.values[base + off + m * stride] = line_out[m];
            }
        }
    }

    const double hd = std::pow(g.spacing(), g.dimension);
    const double scale = std::pow(lambda, (2.0 - alpha) / beta) * hd / g.volume();
    for (auto& z : work.values) z *= scale;
    return work;
}

}  // namespace inls
