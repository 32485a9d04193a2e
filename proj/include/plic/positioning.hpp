#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "plic/error.hpp"
#include "plic/truncation.hpp"

namespace plic {

enum class PositionStatus {
    converged,           // |alpha(s) - target| <= tol at a truncation
    cubic_solved,        // exact root of the bracket-local cubic
    bisection_fallback,  // iteration budget exhausted, finished by bisection
    boundary_clamped,    // target within zero_tol of 0 or 1
};

enum class StepKind { initial, taylor, newton, bisection, cubic };

struct TraceEntry {
    double s = 0.0;      // plane position (absolute units)
    double alpha = 0.0;  // volume fraction found there
    StepKind kind = StepKind::initial;  // rule that produced this position
};

struct PositionQuery {
    double target_fraction = 0.5;
    double tol = 1e-12;         // convergence tolerance on the volume fraction
    int max_iterations = 100;   // truncations before the bisection fallback
    bool record_trace = false;
};

struct PositionResult {
    double s_star = 0.0;
    double alpha_achieved = 0.0;
    int n_truncations = 0;
    PositionStatus status = PositionStatus::converged;
    std::vector<TraceEntry> trace;
};

// Root of 3t^2 - 2t^3 = target in [0,1] (the volume fraction of a body whose
// cross-section area vanishes linearly at both ends), via Viete's
// trigonometric formula. Used as the initial guess in normalized units.
inline double viete_fraction_root(double target) {
    if (target == 0.5) return 0.5; // exact by symmetry; the trig path rounds
    const double theta = std::acos(std::clamp(2.0 * target - 1.0, -1.0, 1.0));
    const double t = 0.5 - std::cos((theta - 2.0 * std::numbers::pi) / 3.0);
    return std::clamp(t, 0.0, 1.0);
}

inline double initial_guess(const StaticCoefficients& c, double target) {
    return c.s_min + c.L * viete_fraction_root(target);
}

// True if normalized boundary slopes (dm at s_min, dp at s_max) admit a
// monotone cubic volume-fraction model on [0, L]; always true for (0, 0).
inline bool admissible_boundary_derivatives(double dm, double dp, double L) {
    const double r = 1.0 / L;
    const double lhs = 3.0 * (dm + dp - 4.0 * r) * (dm + dp - 4.0 * r) + (dm - dp) * (dm - dp);
    return lhs <= 12.0 * r * r || (dm + dp) * L <= 3.0;
}

struct StepResult {
    double delta = 0.0;
    StepKind kind = StepKind::taylor;
};

// One update of the plane position from a local quadratic model of the volume
// fraction (all quantities normalized: s_tilde in [0,1], alpha in [0,1]).
// Takes the quadratic root lying toward the target; degrades to a Newton step
// when the curvature is negligible, the discriminant is negative, or the
// quadratic root leaves [0,1]. Empty when neither derivative gives a usable
// step (caller bisects).
inline std::optional<StepResult> taylor_step(double alpha, double alpha_p, double alpha_pp,
                                             double target, double s_tilde) {
    if (std::abs(alpha_pp) > zero_tol) {
        const double disc = alpha_p * alpha_p - 2.0 * (alpha - target) * alpha_pp;
        if (disc >= 0.0) {
            const double denom = alpha_p + std::sqrt(disc);
            if (denom > 0.0) {
                // Equals (sqrt(disc) - alpha_p) / alpha_pp without cancellation.
                const double delta = -2.0 * (alpha - target) / denom;
                const double nxt = s_tilde + delta;
                if (nxt >= 0.0 && nxt <= 1.0) return StepResult{delta, StepKind::taylor};
            }
        }
    }
    if (alpha_p > zero_tol) return StepResult{-(alpha - target) / alpha_p, StepKind::newton};
    return std::nullopt;
}

// Root of S(z) = target inside [lo, hi], given S(lo) <= target <= S(hi) up to
// zero_tol slack. Newton iteration from the secant starting point, safeguarded
// by keeping a sign-changing interval and bisecting whenever Newton leaves it;
// near-degenerate cubics are solved in closed form. Terminates with
// |S(root) - target| <= tol (polynomial evaluations only, no truncations).
inline double cubic_root_in_bracket(const Cubic& S, double target, double lo, double hi,
                                    double tol = 1e-12) {
    double flo = S.eval(lo) - target;
    double fhi = S.eval(hi) - target;
    if (flo > zero_tol || fhi < -zero_tol) {
        throw NoSignChange("cubic does not straddle the target on the bracket");
    }
    if (flo >= 0.0) return lo;
    if (fhi <= 0.0) return hi;

    if (std::abs(S.c3) < zero_tol) {
        const auto clamp_best = [&](double t1, double t2) {
            const double z1 = std::clamp(S.center + t1, lo, hi);
            const double z2 = std::clamp(S.center + t2, lo, hi);
            return std::abs(S.eval(z1) - target) <= std::abs(S.eval(z2) - target) ? z1 : z2;
        };
        if (std::abs(S.c2) < zero_tol) {
            if (std::abs(S.c1) < zero_tol) return 0.5 * (lo + hi); // constant = target
            const double t = (target - S.c0) / S.c1;
            return std::clamp(S.center + t, lo, hi);
        }
        // Quadratic: stable two-root form, keep the root inside the bracket.
        const double cq = S.c0 - target;
        double disc = S.c1 * S.c1 - 4.0 * S.c2 * cq;
        disc = std::max(disc, 0.0);
        const double q = -0.5 * (S.c1 + std::copysign(std::sqrt(disc), S.c1));
        return clamp_best(q / S.c2, q != 0.0 ? cq / q : q / S.c2);
    }

    double a = lo, b = hi; // f(a) < 0 < f(b) throughout
    double x = lo - flo * (hi - lo) / (fhi - flo);
    if (!(x > a && x < b)) x = 0.5 * (a + b);
    for (int it = 0; it < 200; ++it) {
        const double f = S.eval(x) - target;
        if (std::abs(f) <= tol) return x;
        if (f < 0.0) a = x; else b = x;
        const double fp = S.deriv(x);
        double nxt = std::abs(fp) > zero_tol ? x - f / fp : 0.5 * (a + b);
        if (!(nxt > a && nxt < b)) nxt = 0.5 * (a + b);
        if (b - a <= 1e-17 * std::max({1.0, std::abs(a), std::abs(b)})) break;
        x = nxt;
    }
    return x; // interval exhausted at double resolution; best point found
}

namespace detail {

// Volume sample rescaled to s in [0,1], fraction in [0,1].
struct FractionSample {
    double alpha, ap, app, appp;
    int bracket;
};

inline FractionSample fraction_sample(const StaticCoefficients& c, double s_tilde) {
    const VolumeSample smp = truncated_volume(c, c.s_min + s_tilde * c.L);
    const double iv = 1.0 / c.volume;
    return {smp.V * iv, smp.dV * c.L * iv, smp.d2V * c.L * c.L * iv,
            smp.d3V * c.L * c.L * c.L * iv, smp.bracket_index};
}

template <typename StepPolicy>
PositionResult position_loop(const StaticCoefficients& c, const PositionQuery& q, StepPolicy step) {
    PositionResult res;
    const double tgt = q.target_fraction;
    if (tgt <= zero_tol) {
        return {c.s_min, 0.0, 0, PositionStatus::boundary_clamped, {}};
    }
    if (tgt >= 1.0 - zero_tol) {
        return {c.s_max, 1.0, 0, PositionStatus::boundary_clamped, {}};
    }

    const auto to_abs = [&](double st) { return c.s_min + st * c.L; };
    const auto record = [&](double st, double alpha, StepKind kind) {
        if (q.record_trace) res.trace.push_back({to_abs(st), alpha, kind});
    };

    double lo = 0.0, hi = 1.0;       // alpha(lo) < tgt < alpha(hi)
    double st = viete_fraction_root(tgt);
    double prev = std::numeric_limits<double>::quiet_NaN(); // iterate two steps back
    StepKind kind = StepKind::initial;

    for (int iter = 0; iter < q.max_iterations; ++iter) {
        const FractionSample fs = fraction_sample(c, st);
        ++res.n_truncations;
        record(st, fs.alpha, kind);
        if (std::abs(fs.alpha - tgt) <= q.tol) {
            res.s_star = to_abs(st);
            res.alpha_achieved = fs.alpha;
            res.status = PositionStatus::converged;
            return res;
        }
        if (fs.alpha < tgt) lo = std::max(lo, st); else hi = std::min(hi, st);

        double nxt;
        if (step(c, fs, st, prev, lo, hi, tgt, q, res, nxt, kind)) return res;
        prev = st;
        st = nxt;
    }

    // Iteration budget spent: finish on the sign-changing interval.
    res.status = PositionStatus::bisection_fallback;
    double alpha = 0.0;
    for (int it = 0; it < 200; ++it) {
        st = 0.5 * (lo + hi);
        alpha = fraction_sample(c, st).alpha;
        ++res.n_truncations;
        record(st, alpha, StepKind::bisection);
        if (std::abs(alpha - tgt) <= q.tol) break;
        if (alpha < tgt) lo = st; else hi = st;
        if (hi - lo <= 1e-17) break;
    }
    res.s_star = to_abs(st);
    res.alpha_achieved = alpha;
    return res;
}

} // namespace detail

// Plane position s* with volume fraction target_fraction: Viete initial
// guess, then per truncation either an exact solve of the bracket-local cubic
// (when the target lies in the current bracket's fraction range) or a Taylor
// step, with period-2 loop detection and a bisection fallback.
inline PositionResult position(const StaticCoefficients& c, const PositionQuery& q) {
    auto step = [](const StaticCoefficients& cc, const detail::FractionSample& fs, double st,
                   double prev, double lo, double hi, double tgt, const PositionQuery& qq,
                   PositionResult& res, double& nxt, StepKind& kind) -> bool {
        // Bracket-local cubic; solve exactly if the target is inside.
        const double bl = (cc.brackets[fs.bracket] - cc.s_min) / cc.L;
        const double bh = (cc.brackets[fs.bracket + 1] - cc.s_min) / cc.L;
        const Cubic S{st, fs.alpha, fs.ap, fs.app / 2.0, fs.appp / 6.0};
        const double a_lo = S.eval(bl);
        const double a_hi = S.eval(bh);
        if (a_lo <= tgt && tgt <= a_hi) {
            const double root = cubic_root_in_bracket(S, tgt, bl, bh, qq.tol);
            res.s_star = cc.s_min + root * cc.L;
            res.alpha_achieved = S.eval(root);
            res.status = PositionStatus::cubic_solved;
            if (qq.record_trace) res.trace.push_back({res.s_star, res.alpha_achieved, StepKind::cubic});
            return true;
        }
        const auto sr = taylor_step(fs.alpha, fs.ap, fs.app, tgt, st);
        if (sr) {
            nxt = st + sr->delta;
            kind = sr->kind;
            if (std::abs(nxt - prev) < zero_tol && fs.ap > zero_tol) {
                // Period-2 bounce between two positions: force a Newton step.
                nxt = st - (fs.alpha - tgt) / fs.ap;
                kind = StepKind::newton;
            }
            if (nxt < 0.0 || nxt > 1.0) {
                nxt = 0.5 * (lo + hi);
                kind = StepKind::bisection;
            }
        } else {
            nxt = 0.5 * (lo + hi);
            kind = StepKind::bisection;
        }
        return false;
    };
    return detail::position_loop(c, q, step);
}

// Reference method for iteration-count comparisons: identical loop scaffolding
// but every update is the plain Newton step from (alpha, alpha'), bisecting on
// the maintained sign-changing interval when Newton stalls or leaves [0,1].
inline PositionResult position_newton_baseline(const StaticCoefficients& c, const PositionQuery& q) {
    auto step = [](const StaticCoefficients&, const detail::FractionSample& fs, double st,
                   double /*prev*/, double lo, double hi, double tgt, const PositionQuery&,
                   PositionResult&, double& nxt, StepKind& kind) -> bool {
        if (fs.ap > zero_tol) {
            nxt = st - (fs.alpha - tgt) / fs.ap;
            kind = StepKind::newton;
            if (nxt < 0.0 || nxt > 1.0) {
                nxt = 0.5 * (lo + hi);
                kind = StepKind::bisection;
            }
        } else {
            nxt = 0.5 * (lo + hi);
            kind = StepKind::bisection;
        }
        return false;
    };
    return detail::position_loop(c, q, step);
}

} // namespace plic
