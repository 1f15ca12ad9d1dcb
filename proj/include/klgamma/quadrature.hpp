#pragma once

// Quadrature engines used throughout the library:
//
//  * integrate_semi_infinite  -- exp-sinh double-exponential rule on (0, inf)
//    for integrands with an algebraic endpoint singularity x^sigma, sigma > -1,
//    and (sub)exponential decay at infinity.  Non-oscillatory use only.
//  * integrate_even_real_line -- even integrands on (-inf, inf), reduced to
//    2 * [0, S] with an adaptive composite Gauss-Legendre rule plus a decay
//    bound for the discarded tail.
//  * detail::integrate_panels / detail::march_panels -- adaptive composite
//    Gauss-Legendre building blocks (fixed range / forward marching with
//    termination on negligible panels).  The marching form is what the
//    oscillatory identity integrals are built on: panel width is chosen
//    against the local oscillation wavelength by the caller.
//
// All accumulation is compensated.  Budget exhaustion is soft: the result is
// returned with converged = false rather than thrown.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "klgamma/common.hpp"

namespace klg {

struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_level = 12;       // doublings of the trapezoid density (DE rule)
    long max_evals = 4000000; // integrand evaluation budget
    // Noise level of the integrand itself, relative to its local magnitude.
    // Panel bisection stops once the Gauss-rule difference falls below
    // panel_rel_floor * |panel value|: refining past the evaluation noise
    // only burns budget without gaining accuracy.  Zero means eps-clean.
    double panel_rel_floor = 0.0;

    void validate() const {
        if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0) || abs_tol + rel_tol <= 0.0)
            throw domain_error("QuadratureSpec: tolerances must be nonnegative and not both zero");
        if (max_level < 1)
            throw domain_error("QuadratureSpec: max_level must be >= 1");
        if (max_evals < 16)
            throw domain_error("QuadratureSpec: max_evals must be >= 16");
        if (!(panel_rel_floor >= 0.0) || panel_rel_floor > 1e-3)
            throw domain_error("QuadratureSpec: panel_rel_floor must lie in [0, 1e-3]");
    }
};

template <typename T>
struct IntegrationResult {
    T value{};
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

namespace detail {

// Gauss-Legendre nodes on [-1, 1], positive half (Abramowitz & Stegun 25.4).
inline constexpr double gl12_x[6] = {
    0.1252334085114689, 0.3678314989981802, 0.5873179542866175,
    0.7699026741943047, 0.9041172563704749, 0.9815606342467192};
inline constexpr double gl12_w[6] = {
    0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
    0.1600783285433462, 0.1069393259953184, 0.0471753363865118};

inline constexpr double gl24_x[12] = {
    0.0640568928626056, 0.1911188674736163, 0.3150426796961634,
    0.4337935076260451, 0.5454214713888396, 0.6480936519369755,
    0.7401241915785544, 0.8200019859739029, 0.8864155270044011,
    0.9382745520027328, 0.9747285559713095, 0.9951872199970213};
inline constexpr double gl24_w[12] = {
    0.1279381953467522, 0.1258374563468283, 0.1216704729278034,
    0.1155056680537256, 0.1074442701159656, 0.0976186521041139,
    0.0861901615319533, 0.0733464814110803, 0.0592985849154368,
    0.0442774388174198, 0.0285313886289337, 0.0123412297999872};

template <typename T, typename F>
T gl_apply(F&& f, double a, double b, const double* xs, const double* ws, int m,
           long& evals) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    kahan_sum<T> acc;
    for (int i = 0; i < m; ++i) {
        T lo = f(mid - half * xs[i]);
        T hi = f(mid + half * xs[i]);
        if (!is_finite(cplx(lo) + cplx(hi)))
            throw evaluation_failure("integrand returned a non-finite value near x = " +
                                     std::to_string(mid));
        acc.add(T(ws[i]) * (lo + hi));
        evals += 2;
    }
    return T(half) * acc.value();
}

template <typename T>
struct PanelOutcome {
    T value{};
    double err = 0.0;
    bool within_budget = true;
};

// Adaptive bisection on [a, b]: each panel is accepted when the GL12/GL24
// difference is below tol_density * width, so the total error tracks
// tol_density * (b - a).  rel_floor additionally accepts panels whose
// difference is already at the integrand's own noise level.
template <typename T, typename F>
PanelOutcome<T> integrate_panels(F&& f, double a, double b, double tol_density,
                                 long& evals, long max_evals, double rel_floor = 0.0,
                                 int depth_max = 30) {
    struct Seg { double a, b; int depth; };
    std::vector<Seg> stack{{a, b, 0}};
    kahan_sum<T> acc;
    kahan_sum<double> err_acc;
    PanelOutcome<T> out;
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        if (evals >= max_evals) {
            out.within_budget = false;
            // fall back to the coarse value for whatever remains
            acc.add(gl_apply<T>(f, s.a, s.b, gl24_x, gl24_w, 12, evals));
            err_acc.add(tol_density * (s.b - s.a));
            continue;
        }
        T coarse = gl_apply<T>(f, s.a, s.b, gl12_x, gl12_w, 6, evals);
        T fine = gl_apply<T>(f, s.a, s.b, gl24_x, gl24_w, 12, evals);
        double err = std::abs(cplx(fine) - cplx(coarse));
        if (err <= tol_density * (s.b - s.a) + rel_floor * std::abs(cplx(fine)) ||
            s.depth >= depth_max) {
            acc.add(fine);
            err_acc.add(err);
        } else {
            double m = 0.5 * (s.a + s.b);
            stack.push_back({m, s.b, s.depth + 1});
            stack.push_back({s.a, m, s.depth + 1});
        }
    }
    out.value = acc.value();
    out.err = err_acc.value();
    return out;
}

// March equal-width panels from `a` toward `hard_end`, stopping once
// `quiet_needed` consecutive panels contribute less than a small fraction of
// the running tolerance.  Used for integrands that die off (exponentially or
// by oscillation-damped algebra) at a rate the caller cannot cheaply invert.
template <typename T, typename F>
IntegrationResult<T> march_panels(F&& f, double a, double step, const QuadratureSpec& spec,
                                  double hard_end, long& evals, int quiet_needed = 3) {
    kahan_sum<T> acc;
    kahan_sum<double> err_acc;
    int quiet = 0;
    bool budget_ok = true;
    double lo = a;
    const double tol_density = 0.05 * spec.abs_tol / std::max(step * 40.0, 1.0);
    while (lo < hard_end && quiet < quiet_needed) {
        double hi = std::min(lo + step, hard_end);
        auto p = integrate_panels<T>(f, lo, hi, tol_density, evals, spec.max_evals,
                                     spec.panel_rel_floor);
        acc.add(p.value);
        err_acc.add(p.err);
        budget_ok = budget_ok && p.within_budget;
        double scale = std::max(spec.abs_tol, spec.rel_tol * std::abs(cplx(acc.value())));
        if (std::abs(cplx(p.value)) < 0.01 * scale)
            ++quiet;
        else
            quiet = 0;
        lo = hi;
        if (evals >= spec.max_evals) { budget_ok = false; break; }
    }
    IntegrationResult<T> r;
    r.value = acc.value();
    r.error_estimate = err_acc.value();
    r.evaluations = evals;
    r.converged = budget_ok && quiet >= quiet_needed;
    if (lo >= hard_end) r.converged = budget_ok;  // ran to the wall: fine
    return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// exp-sinh double-exponential rule on (0, inf)
// ---------------------------------------------------------------------------
//
// Substitution x = exp(c sinh t), c = pi/2.  For f ~ x^sigma near 0 with
// sigma > -1 and decaying at infinity, the transformed integrand decays
// doubly exponentially in t on both sides, so the trapezoid rule converges
// at rate exp(-c' 2^level).  Levels halve h with node reuse; the returned
// error estimate is the last inter-level difference.
template <typename T = double, typename F>
IntegrationResult<T> integrate_semi_infinite(F&& f, double sigma, const QuadratureSpec& spec) {
    spec.validate();
    if (!(sigma > -1.0))
        throw domain_error("integrate_semi_infinite: endpoint exponent sigma must exceed -1");

    const double c = 0.5 * pi;
    const double t_cap = std::asinh(690.0 / c);  // keeps x within double range
    IntegrationResult<T> res;
    long evals = 0;

    auto g = [&](double t) -> T {
        double x = std::exp(c * std::sinh(t));
        T fx = f(x);
        if (!is_finite(cplx(fx)))
            throw evaluation_failure("integrand returned a non-finite value at x = " +
                                     std::to_string(x));
        ++evals;
        return fx * T(x * c * std::cosh(t));
    };

    // Level 0, h = 1: march outward from t = 0, recording the live range.
    double h = 1.0;
    kahan_sum<T> sum0;
    double gmax = 0.0;
    double t_lo = 0.0, t_hi = 0.0;
    {
        T g0 = g(0.0);
        gmax = std::abs(cplx(g0));
        sum0.add(g0);
        for (int dir : {+1, -1}) {
            int small_run = 0;
            for (int k = 1;; ++k) {
                double t = dir * k * h;
                if (std::abs(t) > t_cap) break;
                T gv = g(t);
                sum0.add(gv);
                double m = std::abs(cplx(gv));
                gmax = std::max(gmax, m);
                (dir > 0 ? t_hi : t_lo) = t;
                if (m <= 1e-20 * gmax && std::abs(t) >= 2.0) {
                    if (++small_run >= 2) break;
                } else {
                    small_run = 0;
                }
                if (evals >= spec.max_evals) break;
            }
        }
        t_lo = -std::abs(t_lo);
    }

    T integral = T(h) * sum0.value();
    double err = std::abs(cplx(integral));  // placeholder until a refinement exists
    res.converged = false;

    for (int level = 1; level <= spec.max_level; ++level) {
        h *= 0.5;
        kahan_sum<T> odd;
        // new nodes are the odd multiples of h inside [t_lo - h, t_hi + h]
        for (double t = t_lo - h; t <= t_hi + h + 1e-12; t += 2.0 * h) {
            if (std::abs(t) > t_cap) continue;
            odd.add(g(t));
            if (evals >= spec.max_evals) break;
        }
        T refined = T(0.5) * integral + T(h) * odd.value();
        err = std::abs(cplx(refined - integral));
        integral = refined;
        double goal = std::max(spec.abs_tol, spec.rel_tol * std::abs(cplx(integral)));
        if (level >= 2 && err <= goal) {
            res.converged = true;
            break;
        }
        if (evals >= spec.max_evals) break;
    }

    res.value = integral;
    res.error_estimate = err;
    res.evaluations = evals;
    return res;
}

// ---------------------------------------------------------------------------
// Even integrands over the whole real line
// ---------------------------------------------------------------------------
//
// Computes 2 * int_0^S f plus a tail allowance |f(S)| / pi folded into the
// error estimate (valid for integrands decaying at least like exp(-s)).
// osc_freq is an optional hint: the dominant angular frequency of f, used to
// size panels; 0 means "treat as smooth".
template <typename T = double, typename F>
IntegrationResult<T> integrate_even_real_line(F&& f, double truncation_radius,
                                              const QuadratureSpec& spec,
                                              double osc_freq = 0.0) {
    spec.validate();
    if (!(truncation_radius > 0.0))
        throw domain_error("integrate_even_real_line: truncation radius must be positive");

    const double S = truncation_radius;
    long evals = 0;
    double width = std::min({1.0, pi / (2.0 * std::abs(osc_freq) + 1.0), S});
    const double tol_density = 0.1 * spec.abs_tol / S;

    kahan_sum<T> acc;
    kahan_sum<double> err_acc;
    bool budget_ok = true;
    double lo = 0.0;
    while (lo < S) {
        double hi = std::min(lo + width, S);
        auto p = detail::integrate_panels<T>(f, lo, hi, tol_density, evals, spec.max_evals,
                                             spec.panel_rel_floor);
        acc.add(p.value);
        err_acc.add(p.err);
        budget_ok = budget_ok && p.within_budget;
        lo = hi;
    }

    T fS = f(S);
    ++evals;
    IntegrationResult<T> res;
    res.value = T(2.0) * acc.value();
    res.error_estimate = 2.0 * err_acc.value() + std::abs(cplx(fS)) / pi;
    res.evaluations = evals;
    res.converged = budget_ok;
    return res;
}

}  // namespace klg
