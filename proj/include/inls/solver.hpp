#pragma once

// Time integration of i u_t + Delta u = lambda |x|^{-alpha} |u|^beta u two
// independent ways: Picard iteration of the Duhamel map, and Strang
// split-step Fourier as a cross-validation oracle. Plus contraction
// diagnostics, life-span bisection and scattering-state extraction.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "inls/exponents.hpp"
#include "inls/fft.hpp"
#include "inls/grid.hpp"
#include "inls/spectral.hpp"
#include "inls/trajectory.hpp"
#include "inls/weighted.hpp"

namespace inls {

struct NotCauchy : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PicardConfig {
    double T = 0.25;
    int n_t = 32;
    int max_iter = 64;
    double tol = 1e-10;                 // sup-in-time L2 increment
    std::optional<double> M_bound;      // contraction-ball radius, diagnostic only
    double blowup_factor = 1e6;         // sup-norm ceiling relative to the datum
    bool linear_only = false;           // test hook: F == 0

    void validate() const {
        if (!(T > 0)) throw std::invalid_argument("T must be positive");
        if (n_t < 8) throw std::invalid_argument("n_t must be >= 8");
        if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
    }
};

/// The clamped singular prefactor max(|x|, h/2)^{-alpha}, shared by the
/// solved equation and the norm audits.
inline std::vector<double> singular_weight(const GridSpec& g, double alpha) {
    std::vector<double> w(g.total_points());
    const double h = g.spacing();
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = std::pow(std::max(radius_at(g, i), 0.5 * h), -alpha);
    return w;
}

/// F(u) = lambda max(|x|,h/2)^{-alpha} |u|^beta u.
inline ComplexField apply_nonlinearity(const ComplexField& u, const ProblemParams& p) {
    const double alpha = rat_to_double(p.alpha);
    const double beta = rat_to_double(p.beta);
    ComplexField out(u.grid);
    const double h = u.grid.spacing();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double w = std::pow(std::max(radius_at(u.grid, i), 0.5 * h), -alpha);
        out.values[i] = p.lambda * w * std::pow(std::abs(u.values[i]), beta) * u.values[i];
    }
    return out;
}

/// One application of the Duhamel map
///   Phi(u)(t) = e^{it Delta} u0 - i int_0^t e^{i(t-tau) Delta} F(u) dtau,
/// with trapezoid quadrature over the snapshot mesh. Evaluated in Fourier
/// space with a running phase-shifted source sum: O(n_t) transforms total.
inline Trajectory duhamel_map(const Trajectory& traj, const ComplexField& u0,
                              const ProblemParams& p, const PicardConfig& cfg) {
    if (!(traj.grid == u0.grid)) throw std::invalid_argument("grid mismatch");
    const GridSpec& g = traj.grid;
    const std::size_t n = g.total_points();
    const double dt = traj.dt();
    const double inv_n = 1.0 / static_cast<double>(n);
    const double ceiling = cfg.blowup_factor * std::max(u0.sup_norm(), 1e-300);

    std::vector<double> k2(n);
    for (std::size_t i = 0; i < n; ++i) k2[i] = freq_sq_at(g, i);

    std::vector<Complex> u0_hat = u0.values;
    detail::dft_forward(g, u0_hat.data());

    auto source_hat = [&](const ComplexField& snap, double t) {
        std::vector<Complex> h;
        if (cfg.linear_only) {
            h.assign(n, Complex(0, 0));
            return h;
        }
        h = apply_nonlinearity(snap, p).values;
        detail::dft_forward(g, h.data());
        for (std::size_t i = 0; i < n; ++i) h[i] *= std::polar(1.0, t * k2[i]);
        return h;
    };

    Trajectory out(g, traj.horizon, traj.n_t);
    out.snapshots.push_back(u0);

    std::vector<Complex> h0 = source_hat(traj.snapshots[0], 0.0);
    std::vector<Complex> interior(n, Complex(0, 0));
    const Complex minus_i(0, -1);
    for (int k = 1; k <= traj.n_t; ++k) {
        const double tk = traj.time(k);
        std::vector<Complex> hk = source_hat(traj.snapshots[k], tk);
        ComplexField snap(g);
        for (std::size_t i = 0; i < n; ++i) {
            const Complex integral = dt * (0.5 * h0[i] + interior[i] + 0.5 * hk[i]);
            snap.values[i] =
                std::polar(inv_n, -tk * k2[i]) * (u0_hat[i] + minus_i * integral);
        }
        detail::dft_backward(g, snap.values.data());
        if (snap.sup_norm() > ceiling || !snap.finite()) {
            out.blew_up = true;
            out.snapshots.push_back(std::move(snap));
            return out;
        }
        out.snapshots.push_back(std::move(snap));
        for (std::size_t i = 0; i < n; ++i) interior[i] += hk[i];
    }
    return out;
}

enum class SolveStatus { Converged, NoConvergence, BlowUp };

struct PicardResult {
    Trajectory traj;
    int iterations = 0;
    std::vector<double> increments;
    SolveStatus status = SolveStatus::NoConvergence;
};

/// Picard iteration of the Duhamel map from the free-evolution initial guess.
inline PicardResult picard_solve(const ComplexField& u0, const ProblemParams& p,
                                 const PicardConfig& cfg) {
    cfg.validate();
    PicardResult res;
    Trajectory current(u0.grid, cfg.T, cfg.n_t);
    for (int k = 0; k <= cfg.n_t; ++k)
        current.snapshots.push_back(k == 0 ? u0 : free_propagate(u0, current.time(k)));

    for (int it = 1; it <= cfg.max_iter; ++it) {
        Trajectory next = duhamel_map(current, u0, p, cfg);
        res.iterations = it;
        if (next.blew_up) {
            res.traj = std::move(next);
            res.status = SolveStatus::BlowUp;
            return res;
        }
        const double inc = next.sup_l2_distance(current);
        res.increments.push_back(inc);
        current = std::move(next);
        if (inc < cfg.tol) {
            res.traj = std::move(current);
            res.status = SolveStatus::Converged;
            return res;
        }
    }
    res.traj = std::move(current);
    res.status = SolveStatus::NoConvergence;
    return res;
}

/// Strang splitting: half-step free flow, exact phase rotation by the real
/// potential, half-step free flow. Both substeps are unitary, so the
/// discrete mass is conserved to round-off.
inline Trajectory splitstep_solve(const ComplexField& u0, const ProblemParams& p, double dt,
                                  double T, double blowup_factor = 1e6) {
    const int n_steps = static_cast<int>(std::llround(T / dt));
    if (n_steps < 1 || std::abs(n_steps * dt - T) > 1e-9 * T)
        throw std::invalid_argument("dt must divide T");
    const GridSpec& g = u0.grid;
    const double alpha = rat_to_double(p.alpha);
    const double beta = rat_to_double(p.beta);
    const auto w = singular_weight(g, alpha);
    const double ceiling = blowup_factor * std::max(u0.sup_norm(), 1e-300);

    Trajectory out(g, T, n_steps);
    out.snapshots.push_back(u0);
    ComplexField u = u0;
    for (int k = 0; k < n_steps; ++k) {
        u = free_propagate(u, 0.5 * dt);
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double phase = -p.lambda * w[i] * std::pow(std::abs(u.values[i]), beta) * dt;
            u.values[i] *= std::polar(1.0, phase);
        }
        u = free_propagate(u, 0.5 * dt);
        if (u.sup_norm() > ceiling || !u.finite()) {
            out.blew_up = true;
            out.snapshots.push_back(u);
            return out;
        }
        out.snapshots.push_back(u);
    }
    return out;
}

/// d(Phi u, Phi v) / d(u, v) with d = sup-in-time L2 + weighted space-time norm.
inline double contraction_ratio(const Trajectory& u, const Trajectory& v,
                                const ComplexField& u0, const ProblemParams& p,
                                const PicardConfig& cfg, const ExponentTriple& triple) {
    WeightedNormSpec spec;
    spec.q = 1.0 / rat_to_double(triple.inv_q);
    spec.r = 1.0 / rat_to_double(triple.inv_r);
    spec.gamma = rat_to_double(triple.gamma);
    auto metric = [&](const Trajectory& a, const Trajectory& b) {
        Trajectory diff(a.grid, a.horizon, a.n_t);
        for (std::size_t k = 0; k < a.snapshots.size(); ++k)
            diff.snapshots.push_back(a.snapshots[k] - b.snapshots[k]);
        return a.sup_l2_distance(b) + spacetime_norm(diff, spec);
    };
    const double denom = metric(u, v);
    if (denom == 0) throw std::invalid_argument("contraction_ratio requires u != v");
    const Trajectory pu = duhamel_map(u, u0, p, cfg);
    const Trajectory pv = duhamel_map(v, u0, p, cfg);
    return metric(pu, pv) / denom;
}

/// Largest horizon (by bisection on T) on which the Picard iteration still
/// converges for the datum scale * u0. Requires the subcritical regime.
inline double lifespan_estimate(double scale, const ComplexField& u0, const ProblemParams& p,
                                const PicardConfig& cfg) {
    if (!(compute_thetas(p).theta0 > 0))
        throw std::invalid_argument("lifespan_estimate requires theta0 > 0 (subcritical)");
    ComplexField datum = Complex(scale, 0) * u0;
    auto converges = [&](double T) {
        PicardConfig c = cfg;
        c.T = T;
        return picard_solve(datum, p, c).status == SolveStatus::Converged;
    };
    double lo = cfg.T, hi = cfg.T;
    if (converges(lo)) {
        for (int i = 0; i < 40 && converges(2 * hi); ++i) hi *= 2;
        hi *= 2;
    } else {
        for (int i = 0; i < 40 && !converges(lo / 2); ++i) lo /= 2;
        lo /= 2;
        if (!converges(lo)) throw std::runtime_error("no convergent horizon found");
        hi = 2 * lo;
    }
    for (int i = 0; i < 12; ++i) {
        const double mid = std::sqrt(lo * hi);
        (converges(mid) ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

struct ScatteringResult {
    ComplexField phi;                 // e^{-i t_n Delta} u(t_n)
    std::vector<double> increments;   // L2 Cauchy increments of e^{-it Delta} u(t)
};

/// Backward-propagated Cauchy sequence e^{-it_k Delta} u(t_k); the profile at
/// the final time is the scattering-state proxy. Throws NotCauchy if the
/// increments fail to decrease into the final quarter of the run.
inline ScatteringResult scattering_state(const Trajectory& traj, const ProblemParams& p) {
    (void)p;
    if (traj.snapshots.size() < 8) throw std::invalid_argument("trajectory too short");
    ScatteringResult res;
    ComplexField prev = traj.snapshots[0];
    for (int k = 1; k <= traj.n_t; ++k) {
        ComplexField cur = free_propagate(traj.snapshots[k], -traj.time(k));
        res.increments.push_back((cur - prev).l2_norm());
        prev = std::move(cur);
    }
    res.phi = prev;
    const std::size_t m = res.increments.size();
    const std::size_t q = std::max<std::size_t>(1, m / 4);
    double first_min = res.increments[0], final_max = 0;
    for (std::size_t k = 0; k < q; ++k) first_min = std::min(first_min, res.increments[k]);
    for (std::size_t k = m - q; k < m; ++k) final_max = std::max(final_max, res.increments[k]);
    const double floor = 1e-14 * traj.snapshots[0].l2_norm();
    if (final_max > floor && final_max >= first_min)
        throw NotCauchy("backward-propagated increments are not decreasing");
    return res;
}

}  // namespace inls
