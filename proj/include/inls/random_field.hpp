#pragma once

// Gaussian random fields synthesized spectrally: i.i.d. complex Gaussian
// Fourier coefficients shaped by the envelope |xi|^{-p}, normalized post hoc
// in the homogeneous Sobolev norm. The zero mode is dropped.

#include <cmath>
#include <random>

#include "inls/fft.hpp"
#include "inls/grid.hpp"
#include "inls/spectral.hpp"

namespace inls {

inline double default_spectral_slope(int d, double s) { return 0.5 * (d + 2 * s + 1); }

inline ComplexField gaussian_random_field(const GridSpec& g, double p, double s,
                                          std::mt19937_64& rng) {
    ComplexField f(g);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double k2 = freq_sq_at(g, i);
        const double re = gauss(rng), im = gauss(rng);  // drawn unconditionally: keeps
        if (k2 == 0.0) continue;                        // the stream index-independent
        const double env = std::pow(k2, -0.5 * p);
        f.values[i] = env * Complex(re, im);
    }
    detail::dft_backward(g, f.values.data());
    const double inv_n = 1.0 / static_cast<double>(g.total_points());
    for (auto& z : f.values) z *= inv_n;
    const double norm = s == 0.0 ? f.l2_norm() : sobolev_norm(f, s, true);
    if (norm > 0)
        for (auto& z : f.values) z /= norm;
    return f;
}

/// Gaussian bump a * e^{-|x|^2/2}, the reference smooth datum.
inline ComplexField gaussian_bump(const GridSpec& g, double amplitude = 1.0) {
    ComplexField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double r = radius_at(g, i);
        f.values[i] = amplitude * std::exp(-0.5 * r * r);
    }
    return f;
}

}  // namespace inls
