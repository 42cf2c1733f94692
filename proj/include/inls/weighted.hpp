#pragma once

// Weighted Lebesgue and mixed space-time norms with the singular weight
// |x|^{-r gamma}, plus the numerical audits of the Hoelder-chain nonlinear
// estimates. The weight is clamped at half a cell, max(|x|, h/2), so the
// origin cell carries the right O(h^d) integral scale.

#include <cmath>
#include <optional>
#include <stdexcept>

#include "inls/exponents.hpp"
#include "inls/grid.hpp"
#include "inls/spectral.hpp"
#include "inls/trajectory.hpp"

namespace inls {

struct WeightNotIntegrable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WeightedNormSpec {
    double r = 2;                 // spatial integrability, >= 1, < infinity
    double gamma = 0;             // weight |x|^{-r gamma}, gamma >= 0
    std::optional<double> q;      // temporal integrability for space-time norms

    void validate(int d) const {
        if (!(r >= 1)) throw std::invalid_argument("r must be >= 1");
        if (!(gamma >= 0)) throw std::invalid_argument("gamma must be >= 0");
        if (r * gamma >= d) throw WeightNotIntegrable("r*gamma >= d: weight not integrable at origin");
        if (q && !(*q >= 1)) throw std::invalid_argument("q must be >= 1");
    }
};

namespace detail {

/// (sum_x max(|x|,h/2)^p |f(x)|^r h^d)^{1/r}; p is the signed weight power.
inline double weighted_lr_norm_pow(const ComplexField& f, double r, double p) {
    const GridSpec& g = f.grid;
    if (p < 0 && -p >= g.dimension)
        throw WeightNotIntegrable("weight power too singular for quadrature");
    const double h = g.spacing();
    const double hd = std::pow(h, g.dimension);
    double acc = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = std::abs(f.values[i]);
        if (a == 0.0) continue;
        const double rad = std::max(radius_at(g, i), 0.5 * h);
        acc += std::pow(rad, p) * std::pow(a, r) * hd;
    }
    return std::pow(acc, 1.0 / r);
}

/// Composite trapezoid in time of the q-th power of a per-snapshot norm.
/// `stride` subsamples the mesh (for Richardson-style slack estimates).
template <typename SpatialNorm>
inline double spacetime_norm_pow(const Trajectory& traj, double q, SpatialNorm&& spatial,
                                 int stride = 1) {
    const int nt = traj.n_t;
    if (nt / stride < 1 || nt % stride != 0)
        throw std::invalid_argument("time mesh not divisible by stride");
    const double dt = traj.dt() * stride;
    double acc = 0;
    for (int k = 0; k <= nt; k += stride) {
        const double v = std::pow(spatial(traj.snapshots[k]), q);
        const double w = (k == 0 || k == nt) ? 0.5 : 1.0;
        acc += w * v * dt;
    }
    return std::pow(acc, 1.0 / q);
}

}  // namespace detail

/// Weighted spatial norm ||f||_{L^r(|x|^{-r gamma})} on the grid quadrature.
inline double weighted_lebesgue_norm(const ComplexField& f, const WeightedNormSpec& spec) {
    spec.validate(f.grid.dimension);
    return detail::weighted_lr_norm_pow(f, spec.r, -spec.r * spec.gamma);
}

/// ||f||_{L_t^q L_x^r(|x|^{-r gamma})} over the trajectory's time mesh.
inline double spacetime_norm(const Trajectory& traj, const WeightedNormSpec& spec) {
    if (!spec.q) throw std::invalid_argument("spacetime_norm requires spec.q");
    spec.validate(traj.grid.dimension);
    if (traj.snapshots.size() < 2) throw std::invalid_argument("need at least 2 snapshots");
    return detail::spacetime_norm_pow(traj, *spec.q, [&](const ComplexField& f) {
        return detail::weighted_lr_norm_pow(f, spec.r, -spec.r * spec.gamma);
    });
}

struct EstimateCheck {
    double lhs = 0, rhs = 0;
    double tolerance = 0;  // multiplicative slack actually applied
    bool holds = false;
};

namespace detail {

struct EstimateExponents {
    double q, r, gamma;                    // primal triple
    double qt_prime, rt_prime, gamma_t;    // source-side exponents
    double alpha, beta, theta;
};

inline EstimateExponents resolve_exponents(const ProblemParams& p, const ExponentTriple& t,
                                           const DualTriple& dual, const Rat& theta) {
    EstimateExponents e;
    e.q = 1.0 / rat_to_double(t.inv_q);
    e.r = 1.0 / rat_to_double(t.inv_r);
    e.gamma = rat_to_double(t.gamma);
    e.qt_prime = 1.0 / (1.0 - rat_to_double(dual.inv_qt));
    e.rt_prime = 1.0 / (1.0 - rat_to_double(dual.inv_rt));
    e.gamma_t = rat_to_double(dual.gamma_t);
    e.alpha = rat_to_double(p.alpha);
    e.beta = rat_to_double(p.beta);
    e.theta = rat_to_double(theta);
    return e;
}

/// Pointwise max(|x|,h/2)^{-alpha} |u|^beta v, the estimate's integrand.
inline ComplexField nonlinear_product(const ComplexField& u, const ComplexField& v,
                                      double alpha, double beta) {
    ComplexField out(u.grid);
    const double h = u.grid.spacing();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double w = std::pow(std::max(radius_at(u.grid, i), 0.5 * h), -alpha);
        out.values[i] = w * std::pow(std::abs(u.values[i]), beta) * v.values[i];
    }
    return out;
}

template <typename Lhs, typename Rhs>
inline EstimateCheck richardson_check(Lhs&& lhs_at, Rhs&& rhs_at, int n_t) {
    EstimateCheck out;
    out.lhs = lhs_at(1);
    out.rhs = rhs_at(1);
    double budget = 0;
    if (n_t % 2 == 0 && n_t >= 4) {
        budget = std::abs(out.lhs - lhs_at(2)) + std::abs(out.rhs - rhs_at(2));
    }
    out.tolerance = 1e-6 * std::max(out.lhs, out.rhs) + budget;
    out.holds = out.lhs <= out.rhs + out.tolerance;
    return out;
}

inline EstimateCheck check_hoelder_chain(const Trajectory& u, const Trajectory& v,
                                         const ProblemParams& p, const ExponentTriple& triple,
                                         const DualTriple& dual, const Rat& theta, double T) {
    const auto e = detail::resolve_exponents(p, triple, dual, theta);
    Trajectory prod(u.grid, u.horizon, u.n_t);
    for (std::size_t k = 0; k < u.snapshots.size(); ++k)
        prod.snapshots.push_back(
            detail::nonlinear_product(u.snapshots[k], v.snapshots[k], e.alpha, e.beta));

    auto lhs_at = [&](int stride) {
        return detail::spacetime_norm_pow(prod, e.qt_prime, [&](const ComplexField& f) {
            return detail::weighted_lr_norm_pow(f, e.rt_prime, e.rt_prime * e.gamma_t);
        }, stride);
    };
    auto primal = [&](const Trajectory& traj, int stride) {
        return detail::spacetime_norm_pow(traj, e.q, [&](const ComplexField& f) {
            return detail::weighted_lr_norm_pow(f, e.r, -e.r * e.gamma);
        }, stride);
    };
    auto rhs_at = [&](int stride) {
        return std::pow(T, e.theta) * std::pow(primal(u, stride), e.beta) * primal(v, stride);
    };
    return detail::richardson_check(lhs_at, rhs_at, u.n_t);
}

}  // namespace detail

/// Audits the L2-mode nonlinear estimate with constant 1:
/// || |x|^{-alpha} |u|^beta v ||_{dual} <= T^{theta0} ||u||^beta ||v||.
inline EstimateCheck check_nonlinear_estimate_L2(const Trajectory& u, const Trajectory& v,
                                                 const ProblemParams& p,
                                                 const ExponentTriple& triple,
                                                 const DualTriple& dual, double T) {
    return detail::check_hoelder_chain(u, v, p, triple, dual, compute_thetas(p).theta0, T);
}

struct HsEstimateReport {
    EstimateCheck f1;          // constant-1 Hoelder chain, assertable
    double f2_lhs = 0, f2_rhs = 0;
    double f2_ratio = 0;       // lhs / (T^{theta2} ||u||^beta ||v||); bounded, not <= 1
};

/// Audits both Hs-mode nonlinear estimates. The first carries constant 1;
/// the second involves the weighted Sobolev embedding whose constant is
/// unspecified, so only the empirical ratio is reported.
inline HsEstimateReport check_nonlinear_estimate_Hs(const Trajectory& u, const Trajectory& v,
                                                    const ProblemParams& p,
                                                    const ExponentTriple& triple,
                                                    const DualTriple& dual1,
                                                    const DualTriple& dual2, double T) {
    HsEstimateReport rep;
    const auto thetas = compute_thetas(p);
    rep.f1 = detail::check_hoelder_chain(u, v, p, triple, dual1, thetas.theta1, T);

    const auto e2 = detail::resolve_exponents(p, triple, dual2, thetas.theta2);
    const double s = rat_to_double(p.s);
    Trajectory smoothed(u.grid, u.horizon, u.n_t);
    for (std::size_t k = 0; k < u.snapshots.size(); ++k) {
        auto prod = detail::nonlinear_product(u.snapshots[k], v.snapshots[k], e2.alpha, e2.beta);
        smoothed.snapshots.push_back(fractional_derivative(prod, -s));
    }
    rep.f2_lhs = detail::spacetime_norm_pow(smoothed, e2.qt_prime, [&](const ComplexField& f) {
        return detail::weighted_lr_norm_pow(f, e2.rt_prime, e2.rt_prime * e2.gamma_t);
    });
    auto primal2 = [&](const Trajectory& traj) {
        return detail::spacetime_norm_pow(traj, e2.q, [&](const ComplexField& f) {
            return detail::weighted_lr_norm_pow(f, e2.r, -e2.r * e2.gamma);
        });
    };
    rep.f2_rhs = std::pow(T, e2.theta) * std::pow(primal2(u), e2.beta) * primal2(v);
    rep.f2_ratio = rep.f2_rhs > 0 ? rep.f2_lhs / rep.f2_rhs : 0.0;
    return rep;
}

}  // namespace inls
