#pragma once

// Exact rational-arithmetic engine for the exponent systems of the weighted
// Strichartz machinery: admissibility windows, dual-triple constructions and
// the feasibility arguments behind them. No floating point anywhere here;
// open/closed boundaries are decided exactly.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "inls/rational.hpp"

namespace inls {

enum class Mode { L2, Hs };

struct ProblemParams {
    int d = 3;
    Rat alpha;
    Rat beta;
    Rat s = 0;       // ambient Sobolev regularity, 0 in L2 mode
    int lambda = 1;  // +1 defocusing, -1 focusing
    Mode mode = Mode::L2;

    void validate() const {
        if (d < 3) throw std::invalid_argument("d must be >= 3");
        if (!(alpha > 0 && alpha < 2)) throw std::invalid_argument("alpha must lie in (0,2)");
        if (!(beta > 0)) throw std::invalid_argument("beta must be positive");
        if (lambda != 1 && lambda != -1) throw std::invalid_argument("lambda must be +-1");
        if (mode == Mode::L2) {
            if (s != 0) throw std::invalid_argument("L2 mode requires s = 0");
            if (!(beta <= Rat(4 - 2 * alpha) / d))
                throw std::invalid_argument("L2 mode requires beta <= (4-2alpha)/d");
        } else {
            if (!(s > 0 && s < Rat(1, 3))) throw std::invalid_argument("Hs mode requires s in (0,1/3)");
            const Rat lo1 = Rat(26 - 3 * d, 12);
            const Rat lo2 = (12 * s + 4 * d * s - 8 * s * s) / (d + 4 * s);
            if (!(alpha > std::max(lo1, lo2)))
                throw std::invalid_argument("Hs mode: alpha below admissible threshold");
            const Rat blo = std::max(Rat(0), (10 * s - 2 * alpha) / (d - 6 * s));
            const Rat bhi = (4 - 2 * alpha) / (d - 2 * s);
            if (!(beta > blo && beta <= bhi))
                throw std::invalid_argument("Hs mode: beta outside admissible window");
        }
    }
};

struct ExponentTriple {
    Rat inv_q, inv_r, gamma;
};

struct DualTriple {
    Rat inv_qt, inv_rt, gamma_t;
};

struct ThetaValues {
    Rat theta0, theta1, theta2;
};

struct InfeasibleDual : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyFeasibleInterval : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RegionEmpty : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// s_c = d/2 - (2-alpha)/beta.
inline Rat critical_index(const ProblemParams& p) {
    return Rat(p.d, 2) - (2 - p.alpha) / p.beta;
}

inline ThetaValues compute_thetas(const ProblemParams& p) {
    const Rat theta0 = -Rat(p.d) * p.beta / 4 + 1 - p.alpha / 2;
    return {theta0, theta0 + p.s * p.beta / 2, theta0 + p.s * (p.beta + 1) / 2};
}

using NamedChecks = std::vector<std::pair<std::string, bool>>;

inline bool all_pass(const NamedChecks& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.second; });
}

/// Admissibility of (q,r,gamma) for the homogeneous weighted dispersive bound.
inline NamedChecks check_prop1_detail(const ExponentTriple& t, const Rat& s, int d) {
    const Rat half(1, 2);
    NamedChecks c;
    c.emplace_back("scaling 2/q = d(1/2-1/r)+gamma-s",
                   2 * t.inv_q == d * (half - t.inv_r) + t.gamma - s);
    c.emplace_back("(gamma-s)/2 < 1/q", (t.gamma - s) / 2 < t.inv_q);
    c.emplace_back("1/q <= 1/2", t.inv_q <= half);
    c.emplace_back("(gamma-s)/2 <= 1/r", (t.gamma - s) / 2 <= t.inv_r);
    c.emplace_back("1/r < 1/2", t.inv_r < half);
    c.emplace_back("3s < gamma", 3 * s < t.gamma);
    c.emplace_back("gamma < 1+s", t.gamma < 1 + s);
    return c;
}

inline bool check_prop1(const ExponentTriple& t, const Rat& s, int d) {
    return all_pass(check_prop1_detail(t, s, d));
}

/// Admissibility of the dual triple (q~,r~,gamma~) on the source side.
inline NamedChecks check_prop1_dual_detail(const DualTriple& t, const Rat& s, int d) {
    const Rat half(1, 2);
    NamedChecks c;
    c.emplace_back("scaling 2/qt = d(1/2-1/rt)+gammat+s",
                   2 * t.inv_qt == d * (half - t.inv_rt) + t.gamma_t + s);
    c.emplace_back("(gammat+s)/2 < 1/qt", (t.gamma_t + s) / 2 < t.inv_qt);
    c.emplace_back("1/qt <= 1/2", t.inv_qt <= half);
    c.emplace_back("(gammat+s)/2 <= 1/rt", (t.gamma_t + s) / 2 <= t.inv_rt);
    c.emplace_back("1/rt < 1/2", t.inv_rt < half);
    c.emplace_back("s < gammat", s < t.gamma_t);
    c.emplace_back("gammat < 1-s", t.gamma_t < 1 - s);
    return c;
}

inline bool check_prop1_dual(const DualTriple& t, const Rat& s, int d) {
    return all_pass(check_prop1_dual_detail(t, s, d));
}

/// The interpolation-derived region in terms of (1/q, 1/r, gamma, sigma).
inline bool check_interp_region(const Rat& inv_q, const Rat& inv_r, const Rat& gamma,
                                const Rat& sigma, int d) {
    const Rat half(1, 2);
    const Rat th = gamma + sigma;
    if (!(th > 0 && th < 1)) return false;
    if (!(-gamma * (d - 2) / d < sigma && sigma < gamma)) return false;
    if (!(2 * inv_q == d * (half - inv_r) + th)) return false;
    if (!(th / 2 <= inv_q && inv_q <= half)) return false;
    if (!(th / 2 <= inv_r && inv_r <= half)) return false;
    if (inv_q == th / 2 && inv_r == half) return false;  // excluded corner
    return true;
}

/// L2-mode well-posedness window for (q,r,gamma).
inline NamedChecks check_thm1_detail(const ProblemParams& p, const ExponentTriple& t) {
    const Rat half(1, 2);
    const int d = p.d;
    const Rat bp1 = p.beta + 1;
    NamedChecks c;
    c.emplace_back("gamma > max{0,(alpha-1)/(beta+1)}",
                   t.gamma > std::max(Rat(0), (p.alpha - 1) / bp1));
    c.emplace_back("gamma < min{1,alpha/(beta+1)}", t.gamma < std::min(Rat(1), p.alpha / bp1));
    c.emplace_back("scaling 2/q = d(1/2-1/r)+gamma",
                   2 * t.inv_q == d * (half - t.inv_r) + t.gamma);
    c.emplace_back("gamma/2 < 1/q", t.gamma / 2 < t.inv_q);
    c.emplace_back("1/q <= 1/2", t.inv_q <= half);
    c.emplace_back("1/r > 1/(2(beta+1))", t.inv_r > 1 / (2 * bp1));
    c.emplace_back("1/r < (d-2(alpha-1))/(2d(beta+1))+gamma/d",
                   t.inv_r < (d - 2 * (p.alpha - 1)) / (2 * d * bp1) + t.gamma / d);
    return c;
}

inline bool check_thm1(const ProblemParams& p, const ExponentTriple& t) {
    return all_pass(check_thm1_detail(p, t));
}

/// Hs-mode well-posedness window for (q,r,gamma).
inline NamedChecks check_thm2_detail(const ProblemParams& p, const ExponentTriple& t) {
    const Rat half(1, 2);
    const int d = p.d;
    const Rat bp1 = p.beta + 1;
    const Rat s = p.s;
    NamedChecks c;
    c.emplace_back("gamma > max{3s,(alpha+s-1)/(beta+1)}",
                   t.gamma > std::max(3 * s, (p.alpha + s - 1) / bp1));
    c.emplace_back("gamma < min{1+s,(alpha-s)/(beta+1),(d beta+2alpha-4s)/(2(beta+1))}",
                   t.gamma < std::min({1 + s, (p.alpha - s) / bp1,
                                       (d * p.beta + 2 * p.alpha - 4 * s) / (2 * bp1)}));
    c.emplace_back("scaling 2/q = d(1/2-1/r)+gamma-s",
                   2 * t.inv_q == d * (half - t.inv_r) + t.gamma - s);
    c.emplace_back("(gamma-s)/2 < 1/q", (t.gamma - s) / 2 < t.inv_q);
    c.emplace_back("1/q <= 1/2", t.inv_q <= half);
    c.emplace_back("1/r above both lower bounds",
                   t.inv_r > std::max(1 / (2 * bp1),
                                      1 / (2 * bp1) + (2 * s - p.alpha) / (d * bp1) + t.gamma / d));
    c.emplace_back("1/r < (d-2s-2(alpha-1))/(2d(beta+1))+gamma/d",
                   t.inv_r < (d - 2 * s - 2 * (p.alpha - 1)) / (2 * d * bp1) + t.gamma / d);
    return c;
}

inline bool check_thm2(const ProblemParams& p, const ExponentTriple& t) {
    return all_pass(check_thm2_detail(p, t));
}

struct DualDerivation {
    DualTriple dual;
    Rat theta;           // power of T carried by the estimate
    Rat inv_qt_prime;    // 1/q~' (source-side Lebesgue exponent reciprocal)
    Rat inv_rt_prime;    // 1/r~'
    bool q_gt_qt_prime;  // the Christ-Kiselev requirement q > q~'
};

namespace detail {

inline DualDerivation derive_dual_hoelder(const ProblemParams& p, const ExponentTriple& t,
                                          const Rat& theta) {
    const Rat bp1 = p.beta + 1;
    DualDerivation out;
    out.theta = theta;
    out.inv_qt_prime = theta + bp1 * t.inv_q;
    out.inv_rt_prime = bp1 * t.inv_r;
    out.dual.gamma_t = p.alpha - t.gamma * bp1;
    out.dual.inv_qt = 1 - out.inv_qt_prime;
    out.dual.inv_rt = 1 - out.inv_rt_prime;
    if (!(out.inv_qt_prime > 0 && out.inv_qt_prime < 1) ||
        !(out.inv_rt_prime > 0 && out.inv_rt_prime < 1))
        throw InfeasibleDual("derived dual reciprocal left (0,1)");
    out.q_gt_qt_prime = t.inv_q < out.inv_qt_prime;
    return out;
}

}  // namespace detail

/// Dual triple for the L2-mode nonlinear estimate (pure Hoelder chain, constant 1).
inline DualDerivation derive_dual_L2(const ProblemParams& p, const ExponentTriple& t) {
    return detail::derive_dual_hoelder(p, t, compute_thetas(p).theta0);
}

/// First dual triple for the Hs-mode nonlinear estimate.
inline DualDerivation derive_dual_Hs_first(const ProblemParams& p, const ExponentTriple& t) {
    return detail::derive_dual_hoelder(p, t, compute_thetas(p).theta1);
}

struct SecondDualDerivation {
    DualTriple dual;
    Rat theta;
    Rat inv_qt_prime;
    Rat interval_lo, interval_hi;  // exact feasible interval for 1/r~2
    bool q_gt_qt_prime;
};

/// Second dual triple for the Hs-mode estimate: the feasible interval for
/// 1/r~2 is intersected exactly and its midpoint selected.
inline SecondDualDerivation derive_dual_Hs_second(const ProblemParams& p,
                                                  const ExponentTriple& t) {
    const int d = p.d;
    const Rat bp1 = p.beta + 1;
    const Rat s = p.s;
    const Rat a = p.alpha - t.gamma * bp1;  // the weight exponent after the Hoelder step

    const Rat lo_sing = (2 * s - a) / d + 1 - bp1 * t.inv_r;
    const Rat hi_sing = (d - a - d * bp1 * t.inv_r) / (d - 2);
    const Rat lo_emb = 1 - bp1 * t.inv_r;
    const Rat hi_emb = s / d + 1 - bp1 * t.inv_r;
    const Rat L = std::max({lo_sing, lo_emb, s});
    const Rat U = std::min({hi_sing, hi_emb, Rat(1, 2)});
    if (!(L < U)) throw EmptyFeasibleInterval("no admissible 1/r~2");

    SecondDualDerivation out;
    out.interval_lo = L;
    out.interval_hi = U;
    out.theta = compute_thetas(p).theta2;
    const Rat x = (L + U) / 2;  // 1/r~2
    out.dual.inv_rt = x;
    out.dual.gamma_t = a - s - d * (1 - x) + d * bp1 * t.inv_r;
    out.dual.inv_qt = (-Rat(d, 2) + a + d * bp1 * t.inv_r) / 2;
    out.inv_qt_prime = 1 - out.dual.inv_qt;
    if (!(out.inv_qt_prime > 0 && out.inv_qt_prime < 1))
        throw InfeasibleDual("derived 1/q~2' left (0,1)");
    out.q_gt_qt_prime = t.inv_q < out.inv_qt_prime;
    return out;
}

/// Side conditions of the weighted Sobolev embedding step, checked exactly.
inline bool check_embedding_side_conditions(const ProblemParams& p, const ExponentTriple& t,
                                            const DualTriple& dual2) {
    const Rat bp1 = p.beta + 1;
    const Rat a = p.alpha - t.gamma * bp1;
    const Rat inv_rt_prime = 1 - dual2.inv_rt;
    // 1 < r/(beta+1) <= r~2' < infty
    if (!(bp1 * t.inv_r < 1)) return false;
    if (!(inv_rt_prime <= bp1 * t.inv_r)) return false;
    if (!(inv_rt_prime > 0)) return false;
    // gamma~2 <= a, and the embedding index relation
    if (!(dual2.gamma_t <= a)) return false;
    if (!(dual2.gamma_t == a - p.s - p.d * inv_rt_prime + p.d * bp1 * t.inv_r)) return false;
    return true;
}

struct HypothesisRegion {
    int d;
    Rat s;
    Rat alpha_lo, alpha_hi;  // open interval

    // beta window for a given alpha: (first, second], lower bound exclusive
    std::pair<Rat, Rat> beta_interval(const Rat& alpha) const {
        const Rat lo = std::max(Rat(0), (10 * s - 2 * alpha) / (d - 6 * s));
        const Rat hi = (4 - 2 * alpha) / (d - 2 * s);
        return {lo, hi};
    }
};

/// Exact nonemptiness certificate for the hypothesis region of the Hs theory
/// (reducing to the L2 theory ranges at s = 0).
inline HypothesisRegion hypothesis_feasible(int d, const Rat& s) {
    if (d < 3) throw std::invalid_argument("d must be >= 3");
    if (!(s >= 0 && s < Rat(1, 3))) throw std::invalid_argument("s must lie in [0,1/3)");
    HypothesisRegion reg;
    reg.d = d;
    reg.s = s;
    reg.alpha_lo = std::max({Rat(26 - 3 * d, 12), (12 * s + 4 * d * s - 8 * s * s) / (d + 4 * s), Rat(0)});
    reg.alpha_hi = 2;
    if (!(reg.alpha_lo < reg.alpha_hi)) throw RegionEmpty("empty alpha interval");
    return reg;
}

/// f1(s) = -4s^2 + 2(1+d)s; the window argument needs f1(1/3) < d.
inline Rat quadratic_f1(const Rat& s, int d) { return -4 * s * s + 2 * (1 + d) * s; }

/// f2(s) = -10s^2 + (5d+12-4alpha)s; needs f2(1/3) < 2d.
inline Rat quadratic_f2(const Rat& s, int d, const Rat& alpha) {
    return -10 * s * s + (5 * d + 12 - 4 * alpha) * s;
}

namespace detail {

// Uniform rational in the open interval (lo, hi), denominator 2^48.
inline Rat uniform_rational(const Rat& lo, const Rat& hi, std::mt19937_64& rng) {
    const BigInt den = BigInt(1) << 48;
    BigInt nlo = rat_floor(lo * den) + 1;
    BigInt nhi = rat_ceil(hi * den) - 1;
    if (nhi < nlo) return (lo + hi) / 2;  // interval thinner than the lattice
    const BigInt span = nhi - nlo;
    const auto width = static_cast<std::uint64_t>(span);
    std::uniform_int_distribution<std::uint64_t> dist(0, width);
    Rat x(nlo + BigInt(dist(rng)), den);
    if (!(x > lo && x < hi)) x = (lo + hi) / 2;  // lattice point hit a boundary
    return x;
}

}  // namespace detail

/// Draws n exactly-admissible triples for the mode of `p`; deterministic given seed.
inline std::vector<ExponentTriple> region_sample(const ProblemParams& p, std::size_t n,
                                                 std::uint64_t seed) {
    p.validate();
    const Rat half(1, 2);
    const int d = p.d;
    const Rat bp1 = p.beta + 1;
    std::mt19937_64 rng(seed);
    std::vector<ExponentTriple> out;
    out.reserve(n);
    std::size_t attempts = 0;
    const std::size_t max_attempts = 100 * n + 1000;
    while (out.size() < n) {
        if (++attempts > max_attempts) throw RegionEmpty("region sampling exhausted its retry budget");
        Rat g_lo, g_hi, r_lo, r_hi;
        if (p.mode == Mode::L2) {
            g_lo = std::max(Rat(0), (p.alpha - 1) / bp1);
            g_hi = std::min(Rat(1), p.alpha / bp1);
        } else {
            g_lo = std::max(3 * p.s, (p.alpha + p.s - 1) / bp1);
            g_hi = std::min({1 + p.s, (p.alpha - p.s) / bp1,
                             (d * p.beta + 2 * p.alpha - 4 * p.s) / (2 * bp1)});
        }
        if (!(g_lo < g_hi)) throw RegionEmpty("empty gamma window");
        const Rat gamma = detail::uniform_rational(g_lo, g_hi, rng);
        if (p.mode == Mode::L2) {
            r_lo = std::max(1 / (2 * bp1), Rat(d - 2, 2 * d) + gamma / d);
            r_hi = std::min((d - 2 * (p.alpha - 1)) / (2 * d * bp1) + gamma / d, half);
        } else {
            r_lo = std::max({1 / (2 * bp1),
                             1 / (2 * bp1) + (2 * p.s - p.alpha) / (d * bp1) + gamma / d,
                             half - (1 - gamma + p.s) / d});
            r_hi = std::min((d - 2 * p.s - 2 * (p.alpha - 1)) / (2 * d * bp1) + gamma / d, half);
        }
        if (!(r_lo < r_hi)) continue;
        const Rat inv_r = detail::uniform_rational(r_lo, r_hi, rng);
        ExponentTriple t{(d * (half - inv_r) + gamma - p.s) / 2, inv_r, gamma};
        const bool ok = (p.mode == Mode::L2) ? check_thm1(p, t) : check_thm2(p, t);
        if (ok) out.push_back(std::move(t));
    }
    return out;
}

}  // namespace inls
