#pragma once
// Heat flow of the modified-Bessel operator on the half line:
//
//     dU/dt = y^2 d2U/dy2 + y dU/dy - (y^2 + p^2) U,        U(0, y) = y^p.
//
// Macdonald functions diagonalize the spatial part L = y^2 d2 + y d - y^2
// (L K_w = w^2 K_w), so the continuous family K_{iu} relaxes by the factor
// e^{-(p^2+u^2) t} and the solution is the Kontorovich-Lebedev synthesis of
// the initial power:
//
//   U_p(t,y) = 2^{p-1}/pi^2 int_0^inf u sinh(pi u) |Gamma(p/2 + iu/2)|^2
//                            e^{-(p^2+u^2) t} K_{iu}(y) du
//            - sum_{k=0}^{n} c_k e^{lambda_k t} K_{-p-2k}(y),
//
//   c_k = 2^{p+1} (p+2k) / (k! Gamma(1-p-k)),   lambda_k = 4k(p+k) <= 0.
//
// The discrete terms are the residues the inversion contour sheds once p
// drops below zero, one per crossed pole of the density: none for p > 0,
// n = floor(-p/2) of them for p < 0.  Their leading small-y behaviour is
// exactly -y^{p+2k} (the k = 0 term alone carries the whole y^p blow-up),
// which is how the synthesis recovers the initial condition as t -> 0.
//
// Three evaluation routes cross-check one another:
//   * spectral_single:   the synthesis above with the closed gamma-product
//                        density, marched in u with oscillation-aware panels.
//   * spectral_double:   the same outer integral, but with the Mellin density
//                        int_0^inf x^{p-1} K_{iu}(x) dx recomputed by
//                        quadrature (p > 0 only).  The numeric/closed ratio is
//                        interpolated on a Chebyshev grid over the u-range
//                        that carries the heat weight and frozen beyond it,
//                        so the check concentrates where the mass is.
//   * finite_difference: Crank-Nicolson for the PDE in v = ln y, where the
//                        operator is d2/dv2 - (e^{2v} + p^2).  The left edge
//                        carries the Robin condition dU/dv = p U satisfied by
//                        the dominant e^{pv} behaviour, the right edge is
//                        Dirichlet (the e^{2v} potential kills U there).
//                        Corrections do not apply; n is ignored.
//
// Errors: y or t nonpositive -> domain_error; t < 1e-8 or |p| > 30 or
// spectral y > 6 -> range_error; p at a nonpositive even integer (density
// pole) -> pole_error; n not matching the strip of p -> strip_mismatch_error;
// spectral_double outside 0 < p <= 4 -> domain/range_error; finite-difference
// grid below nv = 32 / nt = 16 -> domain_error.

#include <cmath>
#include <string>
#include <vector>

#include "klgamma/bessel.hpp"
#include "klgamma/common.hpp"
#include "klgamma/gamma.hpp"
#include "klgamma/quadrature.hpp"

namespace klg {

enum class FPMethod { spectral_single, spectral_double, finite_difference };

inline const char* to_string(FPMethod m) {
    switch (m) {
        case FPMethod::spectral_single: return "spectral_single";
        case FPMethod::spectral_double: return "spectral_double";
        case FPMethod::finite_difference: return "finite_difference";
    }
    return "unknown";
}

struct FPQuery {
    double p = 1.0;
    double t = 0.1;
    double y = 1.0;
    int n = 0;  // discrete correction count: floor(-p/2) for p < 0, else 0
    FPMethod method = FPMethod::spectral_single;
    int nv = 1500;  // finite-difference intervals in v = ln y
    int nt = 300;   // finite-difference time steps
};

struct FPResult {
    double value = 0.0;
    // c_k e^{lambda_k t} K_{-p-2k}(y) for k = 0..n, already subtracted.
    std::vector<double> correction_terms;
    double u_truncation = 0.0;  // where the spectral march stopped
    double est_error = 0.0;
};

namespace detail {

inline int fp_correction_count(double p) {
    return p < 0.0 ? static_cast<int>(std::floor(-0.5 * p)) : 0;
}

inline void check_fp_common(const FPQuery& q) {
    if (!(q.y > 0.0)) throw domain_error("fokker_planck: y must be positive");
    if (!(q.t > 0.0)) throw domain_error("fokker_planck: t must be positive");
    if (q.t < 1e-8)
        throw range_error("fokker_planck: t below 1e-8 leaves the initial layer unresolved");
    if (std::abs(q.p) > 30.0)
        throw range_error("fokker_planck: |p| exceeds validated envelope 30");
}

inline void check_fp_strip(double p, int n) {
    if (p <= 1e-12 && dist_to_integer(0.5 * p) < 1e-12)
        throw pole_error(
            "fokker_planck: p at a nonpositive even integer is a pole of the spectral density");
    const int need = fp_correction_count(p);
    if (n != need)
        throw strip_mismatch_error("fokker_planck: p = " + std::to_string(p) +
                                   " needs n = " + std::to_string(need));
}

inline void check_fp_spectral(const FPQuery& q) {
    check_fp_strip(q.p, q.n);
    if (q.y > 6.0)
        throw range_error(
            "fokker_planck: spectral synthesis needs y <= 6 (scaled Macdonald series window)");
    // For p > 1 the density grows like u^{p-1} until the heat factor wins;
    // past e^{40} the recovery is oscillatory cancellation doubles cannot do.
    if (q.p > 1.0) {
        const double us = std::sqrt((q.p - 1.0) / (2.0 * q.t));
        const double lmax = (q.p - 1.0) * std::log(std::max(0.5 * us, 1.0)) - 0.5 * (q.p - 1.0);
        if (lmax > 40.0)
            throw range_error(
                "fokker_planck: p/t combination drives the spectral density beyond "
                "cancellation range (increase t or reduce p)");
    }
}

// Closed Mellin density, scaled to unit growth:
//   ghat(u) = e^{pi u/2} int_0^inf x^{p-1} K_{iu}(x) dx
//           = 2^{p-2} exp(2 Re lnGamma(p/2 + iu/2) + pi u/2).
inline double fp_density_closed(double p, double u) {
    return std::pow(2.0, p - 2.0) *
           std::exp(2.0 * std::real(lgamma_complex(cplx(0.5 * p, 0.5 * u))) + 0.5 * pi * u);
}

// Outer Kontorovich-Lebedev synthesis
//   1/pi^2 int_0^inf u (1 - e^{-2 pi u}) ghat(u) e^{-(p^2+u^2)t} Khat(u,y) du
// with Khat = e^{pi u/2} K_{iu}(y); the e^{pi u} of sinh has cancelled the
// two e^{-pi u/2} scales, leaving every factor at unit growth.  Panels are
// sized against the K_{iu}(y) oscillation rate ~ ln(u/y) and the march stops
// once the heat factor silences three consecutive panels.
template <typename G>
IntegrationResult<double> fp_synthesis(const G& ghat, double p, double t, double y, double u_cap,
                                       double& u_stop) {
    QuadratureSpec spec;
    spec.panel_rel_floor = 1e-12;  // Macdonald series noise
    const double inv_pi2 = 1.0 / (pi * pi);
    auto f = [&](double u) -> double {
        if (u <= 0.0) return 0.0;
        return inv_pi2 * u * (-std::expm1(-2.0 * pi * u)) * ghat(u) *
               std::exp(-(p * p + u * u) * t) * bessel_k_imag_scaled(u, y);
    };
    const double tol_density = 0.05 * spec.abs_tol / 40.0;
    kahan_sum<double> acc;
    kahan_sum<double> err_acc;
    long evals = 0;
    int quiet = 0;
    bool budget_ok = true;
    double lo = 0.0;
    while (lo < u_cap && quiet < 3) {
        const double freq = std::max(std::log((lo + 2.0) / y), 0.0) + 2.0;
        const double hi = std::min(lo + pi / (2.0 * freq + 1.0), u_cap);
        // The Macdonald series carries ~u ln u radians of phase whose rounding
        // jitter is the evaluation noise; anchoring the panel tolerance to it
        // (scaled by the local integrand amplitude) keeps bisection from
        // chasing digits the series does not have on cancelling panels.
        const double phase =
            lo * (std::abs(std::log(0.5 * y)) + std::max(std::log(lo + 1.0), 1.0) + 2.0);
        const double amp = inv_pi2 * std::max(lo, 0.5) * ghat(lo) *
                           std::exp(-(p * p + lo * lo) * t) *
                           std::sqrt(2.0 * pi / std::max(lo, 1.0));
        const double tden = std::max(tol_density, phase * 2.4e-16 * amp);
        auto pnl = integrate_panels<double>(f, lo, hi, tden, evals, spec.max_evals,
                                            spec.panel_rel_floor);
        acc.add(pnl.value);
        err_acc.add(pnl.err);
        budget_ok = budget_ok && pnl.within_budget;
        const double scale = std::max(spec.abs_tol, spec.rel_tol * std::abs(acc.value()));
        quiet = std::abs(pnl.value) < 0.01 * scale ? quiet + 1 : 0;
        lo = hi;
        if (evals >= spec.max_evals) {
            budget_ok = false;
            break;
        }
    }
    u_stop = lo;
    IntegrationResult<double> r;
    r.value = acc.value();
    // Gaussian tail beyond the stop point: int_u^inf g e^{-v^2 t} dv is about
    // g(u) e^{-u^2 t} / (2 u t) and the integrand already carries the weight.
    const double tail = u_stop > 0.0 ? std::abs(f(u_stop)) / std::max(2.0 * u_stop * t, 0.5) : 0.0;
    r.error_estimate = err_acc.value() + tail + 0.1 * spec.abs_tol;
    r.evaluations = evals;
    r.converged = budget_ok && (quiet >= 3 || lo >= u_cap);
    return r;
}

inline std::vector<double> fp_corrections(double p, double t, double y, int n) {
    std::vector<double> out;
    for (int k = 0; k <= n; ++k) {
        const double ck =
            std::pow(2.0, p + 1.0) * (p + 2.0 * k) / (factorial(k) * std::tgamma(1.0 - p - k));
        const double lk = 4.0 * k * (p + k);  // (p+2k)^2 - p^2, never positive here
        const double kk = bessel_k(cplx(-p - 2.0 * k, 0.0), y).real();
        out.push_back(ck * std::exp(lk * t) * kk);
    }
    return out;
}

inline FPResult fp_spectral_single(const FPQuery& q) {
    check_fp_spectral(q);
    const double p = q.p;
    auto ghat = [p](double u) { return fp_density_closed(p, u); };
    const double u_cap = std::sqrt(std::log(1e12) / q.t) + 20.0;
    FPResult r;
    auto ir = fp_synthesis(ghat, p, q.t, q.y, u_cap, r.u_truncation);
    double corr = 0.0, corr_abs = 0.0;
    if (p < 0.0) {
        r.correction_terms = fp_corrections(p, q.t, q.y, q.n);
        for (double c : r.correction_terms) {
            corr += c;
            corr_abs += std::abs(c);
        }
    }
    r.value = ir.value - corr;
    r.est_error = ir.error_estimate + 5e-15 * (std::abs(ir.value) + corr_abs);
    if (!ir.converged) r.est_error = std::max(r.est_error, 0.01 * (1.0 + std::abs(r.value)));
    return r;
}

// Upper incomplete gamma Gamma(p, z) for z >= 6, p <= 4: Lentz continued
// fraction on Gamma(p,z) e^{z} z^{-p} (Numerical Recipes 6.2 layout).
inline double upper_gamma(double p, double z) {
    double b = z + 1.0 - p;
    double c = 1e308;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 300; ++i) {
        const double an = -i * (i - p);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    const double lead = -z + p * std::log(z);
    return lead < -745.0 ? 0.0 : std::exp(lead) * h;
}

// Numeric Mellin density at one frequency, scaled like fp_density_closed:
//   ghat_num(u) = e^{pi u/2} int_0^inf x^{p-1} K_{iu}(x) dx.
// Below x = 6 the scaled Macdonald series integrates in w = ln(6/x); above,
// the order of integration is swapped through K's cosine representation,
//   int_6^inf x^{p-1} K_{iu}(x) dx
//     = int_0^inf cos(u s) Gamma(p, 6 cosh s) cosh^{-p} s ds,
// an incomplete-gamma transform whose e^{-pi u/2} smallness emerges by
// cancellation -- accurate for the moderate u this is invoked at.
inline double fp_density_numeric(double p, double u) {
    QuadratureSpec spec;
    spec.abs_tol = 1e-11;
    spec.rel_tol = 1e-11;
    spec.panel_rel_floor = 1e-12;
    long evals = 0;

    auto upper = [&](double s) {
        const double ch = std::cosh(s);
        return std::cos(u * s) * upper_gamma(p, 6.0 * ch) * std::pow(ch, -p);
    };
    auto ru = march_panels<double>(upper, 0.0, pi / (2.0 * u + 1.0), spec, 6.0, evals);

    auto lower = [&](double w) {
        const double x = 6.0 * std::exp(-w);
        return std::pow(x, p) * bessel_k_imag_scaled(u, x);
    };
    const double step = std::min(pi / (2.0 * u + 1.0), 1.5);
    auto rl = march_panels<double>(lower, 0.0, step, spec, 2.0 + 32.0 / p, evals);

    return std::exp(0.5 * pi * u) * ru.value + rl.value;
}

// Chebyshev-Lobatto interpolant (barycentric evaluation).
struct ChebFit {
    double a = 0.0, b = 1.0;
    std::vector<double> nodes, vals;

    template <typename F>
    static ChebFit build(const F& f, double a, double b, int n_points) {
        ChebFit c;
        c.a = a;
        c.b = b;
        for (int j = 0; j < n_points; ++j) {
            const double x =
                0.5 * (a + b) + 0.5 * (b - a) * std::cos(j * pi / (n_points - 1.0));
            c.nodes.push_back(x);
            c.vals.push_back(f(x));
        }
        return c;
    }

    double eval(double x) const {
        kahan_sum<double> num, den;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            const double d = x - nodes[j];
            if (d == 0.0) return vals[j];
            double w = (j % 2 == 0) ? 1.0 : -1.0;
            if (j == 0 || j + 1 == nodes.size()) w *= 0.5;
            num.add(w / d * vals[j]);
            den.add(w / d);
        }
        return num.value() / den.value();
    }
};

inline FPResult fp_spectral_double(const FPQuery& q) {
    if (!(q.p > 0.0))
        throw domain_error(
            "fokker_planck: spectral_double needs p > 0 (the power tail of the inner "
            "Mellin transform diverges otherwise)");
    if (q.p > 4.0)
        throw range_error("fokker_planck: spectral_double validated for 0 < p <= 4");
    check_fp_spectral(q);
    const double p = q.p;

    // Ratio of numeric to closed density on the u-range carrying the heat
    // weight; past u_ratio the cosine-transform cancellation outruns double
    // precision, so the ratio is frozen (the tail is shared with the closed
    // route and carries e^{-u^2 t}-suppressed weight anyway).
    const double u_ratio = 8.5;
    auto ratio = [p](double u) { return fp_density_numeric(p, u) / fp_density_closed(p, u); };
    const ChebFit fit = ChebFit::build(ratio, 0.0, u_ratio, 72);
    const double ratio_end = fit.eval(u_ratio);
    auto ghat = [&](double u) {
        return fp_density_closed(p, u) * (u <= u_ratio ? fit.eval(u) : ratio_end);
    };

    double dev = std::abs(ratio_end - 1.0);
    for (double up : {1.7, 4.3, 6.9})
        dev = std::max(dev, std::abs(fp_density_numeric(p, up) / ghat(up) - 1.0));

    const double u_cap = std::sqrt(std::log(1e12) / q.t) + 20.0;
    FPResult r;
    auto ir = fp_synthesis(ghat, p, q.t, q.y, u_cap, r.u_truncation);
    r.value = ir.value;
    // dev covers the interpolation; 3e-11 covers the inner march tolerance.
    r.est_error = ir.error_estimate + (2.0 * dev + 3e-11) * std::abs(ir.value);
    if (!ir.converged) r.est_error = std::max(r.est_error, 0.01 * (1.0 + std::abs(r.value)));
    return r;
}

// One Crank-Nicolson sweep for dU/dt = d2U/dv2 - (e^{2v} + p^2) U on
// [ln y - 8, ln y + 4], Robin dU/dv = pU at the left edge (exact for the
// e^{pv} behaviour that dominates there), Dirichlet 0 at the right.  nv is
// rounded up to a multiple of three so ln y lands on a grid node.
inline double fd_sweep(double p, double t, double y, int nv, int nt) {
    nv += (3 - nv % 3) % 3;
    const double v_lo = std::log(y) - 8.0;
    const double h = 12.0 / nv;
    const double dt = t / nt;
    const int m = nv;  // unknowns at v_lo + i h, i < m; U = 0 at i = m

    std::vector<double> sub(m), diag(m), sup(m);
    for (int i = 0; i < m; ++i) {
        const double v = v_lo + i * h;
        const double qv = std::exp(2.0 * v) + p * p;
        sub[i] = 1.0 / (h * h);
        diag[i] = -2.0 / (h * h) - qv;
        sup[i] = 1.0 / (h * h);
    }
    // Robin row replaces the generic stencil: ghost U_{-1} = U_1 - 2 h p U_0.
    diag[0] = -(2.0 + 2.0 * h * p) / (h * h) - (std::exp(2.0 * v_lo) + p * p);
    sup[0] = 2.0 / (h * h);
    sub[0] = 0.0;

    // Factor I - dt/2 A once (Thomas); the matrix is constant in time.
    std::vector<double> ld(m), ud(m), dd_(m);
    for (int i = 0; i < m; ++i) {
        ld[i] = -0.5 * dt * sub[i];
        dd_[i] = 1.0 - 0.5 * dt * diag[i];
        ud[i] = -0.5 * dt * sup[i];
    }
    std::vector<double> cp(m);
    cp[0] = ud[0] / dd_[0];
    for (int i = 1; i < m; ++i) cp[i] = ud[i] / (dd_[i] - ld[i] * cp[i - 1]);

    std::vector<double> u(m), rhs(m);
    for (int i = 0; i < m; ++i) u[i] = std::exp(p * (v_lo + i * h));

    for (int step = 0; step < nt; ++step) {
        rhs[0] = u[0] + 0.5 * dt * (diag[0] * u[0] + sup[0] * u[1]);
        for (int i = 1; i < m; ++i) {
            const double right = (i + 1 < m) ? u[i + 1] : 0.0;
            rhs[i] = u[i] + 0.5 * dt * (sub[i] * u[i - 1] + diag[i] * u[i] + sup[i] * right);
        }
        // forward elimination / back substitution
        rhs[0] /= dd_[0];
        for (int i = 1; i < m; ++i)
            rhs[i] = (rhs[i] - ld[i] * rhs[i - 1]) / (dd_[i] - ld[i] * cp[i - 1]);
        u[m - 1] = rhs[m - 1];
        for (int i = m - 2; i >= 0; --i) u[i] = rhs[i] - cp[i] * u[i + 1];
    }
    return u[(2 * nv) / 3];  // the node at v = ln y
}

inline FPResult fp_finite_difference(const FPQuery& q) {
    if (q.nv < 32 || q.nt < 16)
        throw domain_error("fokker_planck: finite-difference grid needs nv >= 32 and nt >= 16");
    const double coarse = fd_sweep(q.p, q.t, q.y, q.nv, q.nt);
    const double fine = fd_sweep(q.p, q.t, q.y, 2 * q.nv, 2 * q.nt);
    FPResult r;
    r.value = fine;
    r.est_error = std::abs(fine - coarse) / 3.0;  // both orders are quadratic
    return r;
}

}  // namespace detail

inline FPResult fokker_planck(const FPQuery& q) {
    detail::check_fp_common(q);
    switch (q.method) {
        case FPMethod::spectral_single: return detail::fp_spectral_single(q);
        case FPMethod::spectral_double: return detail::fp_spectral_double(q);
        case FPMethod::finite_difference: return detail::fp_finite_difference(q);
    }
    throw domain_error("fokker_planck: unknown method");
}

}  // namespace klg
