#pragma once

// The renormalized Macdonald kernel
//
//   Psi_n(x; z) = 1 + (2/x)^{2z} sum_{k=0}^{n} 4(k+z) / (k! Gamma(1-k-2z)) K_{2k+2z}(x)
//
// for z in the half-strip -n-1 < Re z < -n.  The subtracted Macdonald terms
// cancel the singular small-x powers of the classical integrand, leaving
// |Psi_n| = O(x^{min(-2n-4 Re z, 2n+2)}) as x -> 0 (with a logarithm exactly
// at half-integer z).  Evaluating the display form at small x loses all
// significance to that cancellation, so three regimes are used:
//
//   direct_bessel       x >= x_switch: the display form as written.
//   small_x_series      x < x_switch, sin(2 pi z) away from 0: the
//                       cancellation-free rearrangement
//                         Psi_n = (2 pi / sin 2 pi z) [ sum_k (k+z)/(k! Gamma(1-k-2z))
//                                   (x/2)^{-4z-2k} Itilde_k(x)  -  T_n(x) ]
//                       where Itilde_k collects the ascending I-series with
//                       all x-powers analytically combined (every exponent
//                       has positive real part in the strip) and T_n is the
//                       tail series below.
//   extended_precision  x < x_switch inside the sine gate: exactly at
//                       z = -(2m+1)/2 (within 1e-9, n = m) an analytic
//                       log-power series with rational coefficients; at
//                       other gated points a double-double compensated
//                       direct sum (reduced accuracy, reported in est_error).
//
// T_n is the entire double series
//   T_n(x) = sum_{l>n} (x/2)^{2l}/l! sum_{k=0}^{n} C(l,k)(k+z)
//            / (Gamma(1-2z-k) Gamma(k+l+2z+1)),
// whose k-sum telescopes to zero for l <= n (a Saalschuetz-type identity;
// see saalschutz_check).

#include <array>
#include <vector>

#include "klgamma/bessel.hpp"
#include "klgamma/common.hpp"
#include "klgamma/gamma.hpp"

namespace klg {

struct KernelParams {
    cplx z;
    int n = 0;
    double x_switch = 0.5;
    double sin_threshold = 1e-3;
    double tail_tol = 1e-16;

    void validate() const {
        if (n < 0 || n > 8)
            throw range_error("KernelParams: subtraction depth n must be in [0, 8]");
        if (std::abs(z.imag()) > 10.0)
            throw range_error("KernelParams: |Im z| exceeds validated envelope 10");
        if (!(z.real() > -n - 1.0 && z.real() < -static_cast<double>(n)))
            throw strip_mismatch_error(
                "KernelParams: Re z = " + std::to_string(z.real()) +
                " outside the half-strip (-" + std::to_string(n + 1) + ", -" +
                std::to_string(n) + ") for n = " + std::to_string(n));
        if (!(x_switch > 0.0))
            throw domain_error("KernelParams: x_switch must be positive");
        if (!(sin_threshold > 0.0 && sin_threshold < 0.1))
            throw domain_error("KernelParams: sin_threshold must lie in (0, 0.1)");
        if (!(tail_tol > 0.0))
            throw domain_error("KernelParams: tail_tol must be positive");
    }
};

enum class KernelRegime { small_x_series, direct_bessel, extended_precision };

inline const char* to_string(KernelRegime r) {
    switch (r) {
        case KernelRegime::small_x_series: return "small_x_series";
        case KernelRegime::direct_bessel: return "direct_bessel";
        case KernelRegime::extended_precision: return "extended_precision";
    }
    return "?";
}

struct KernelValue {
    cplx psi;
    KernelRegime regime;
    double est_error;
};

// ---------------------------------------------------------------------------
// Tail series T_n
// ---------------------------------------------------------------------------

inline cplx tail_series(double x, cplx z, int n, double tail_tol = 1e-16) {
    if (!(x > 0.0)) throw domain_error("tail_series: x must be positive");
    if (x > 10.0) throw domain_error("tail_series: series validated only for x <= 10");
    if (n < 0 || n > 8) throw range_error("tail_series: n must be in [0, 8]");
    if (!(z.real() > -n - 1.0))
        throw domain_error("tail_series: requires Re z > -n-1");

    const double q = 0.25 * x * x;
    // a_k = (k+z) / (k! Gamma(1-2z-k)); the remaining reciprocal Gamma is
    // evaluated per (k, l) in its reflection form.
    std::array<cplx, 9> a{};
    for (int k = 0; k <= n; ++k)
        a[k] = (cplx(k, 0.0) + z) * rgamma(1.0 - 2.0 * z - cplx(k, 0.0)) / factorial(k);
    // u_k(l) = q^l / (l-k)!  maintained by recurrence (bounded by e^q)
    std::array<double, 9> u{};
    for (int k = 0; k <= n; ++k) {
        double v = 1.0;
        for (int j = 1; j <= n + 1 - k; ++j) v *= q / j;  // q^{n+1-k}/(n+1-k)!
        for (int j = 0; j < k; ++j) v *= q;               // restore q^{n+1}
        u[k] = v;
    }

    kahan_sum<cplx> acc;
    int quiet = 0;
    for (int l = n + 1; l <= 500; ++l) {
        kahan_sum<cplx> inner;
        for (int k = 0; k <= n; ++k)
            inner.add(a[k] * u[k] * reflection_gamma(k, l, z));
        cplx term = inner.value();
        acc.add(term);
        double scale = std::max(std::abs(acc.value()), 1e-300);
        if (std::abs(term) <= tail_tol * scale && l > q) {
            if (++quiet >= 2) return acc.value();
        } else {
            quiet = 0;
        }
        for (int k = 0; k <= n; ++k) u[k] *= q / (l + 1 - k);
    }
    throw evaluation_failure("tail_series: no convergence within 500 terms");
}

// Saalschuetz-type combination that vanishes identically:
//   sum_{k=0}^{l} C(l,k) (k+z) (-2z-2l)_{l-k} (2z)_k  =  0   (l >= 1)
// This is the finite-sum certificate behind the vanishing of the T_n
// coefficients for l <= n.
inline cplx saalschutz_check(int l, cplx z) {
    if (l < 1) throw domain_error("saalschutz_check: l must be >= 1");
    kahan_sum<cplx> acc;
    double binom = 1.0;
    for (int k = 0; k <= l; ++k) {
        if (k > 0) binom *= static_cast<double>(l - k + 1) / k;
        acc.add(binom * (cplx(k, 0.0) + z) * pochhammer(-2.0 * z - cplx(2 * l, 0.0), l - k) *
                pochhammer(2.0 * z, k));
    }
    return acc.value();
}

namespace detail {

// ---- direct display form (x >= x_switch), optionally in double-double ----

inline KernelValue psi_direct(double x, const KernelParams& p, bool use_dd) {
    if (x >= 746.0) {  // every Macdonald term underflows; avoid 0 * overflow
        return {cplx(1.0, 0.0),
                use_dd ? KernelRegime::extended_precision : KernelRegime::direct_bessel,
                1e-16};
    }
    const cplx z = p.z;
    const cplx pref = std::exp(2.0 * z * std::log(2.0 / x));
    kahan_sum<cplx> acc;
    ddcplx dd_acc{};
    double mag = 0.0;
    for (int k = 0; k <= p.n; ++k) {
        cplx coef = 4.0 * (cplx(k, 0.0) + z) * rgamma(1.0 - cplx(k, 0.0) - 2.0 * z) /
                    factorial(k);
        cplx term = pref * coef * bessel_k(2.0 * cplx(k, 0.0) + 2.0 * z, x);
        mag += std::abs(term);
        if (use_dd)
            dd_acc = dd_acc + ddcplx(term);
        else
            acc.add(term);
    }
    cplx sum = use_dd ? (dd_acc + ddcplx(cplx(1.0, 0.0))).to_cplx()
                      : (acc.add(cplx(1.0, 0.0)), acc.value());
    // accuracy is set by the quadrature error of each Macdonald term
    double est = 3e-14 * (mag + 1.0) + 1e-16 * std::abs(sum);
    return {sum, use_dd ? KernelRegime::extended_precision : KernelRegime::direct_bessel,
            est};
}

// ---- cancellation-free series (x < x_switch, sine comfortably nonzero) ----

inline KernelValue psi_series(double x, const KernelParams& p) {
    const cplx z = p.z;
    const double q = 0.25 * x * x;
    const double lg = std::log(0.5 * x);
    kahan_sum<cplx> acc;
    double mag = 0.0;
    for (int k = 0; k <= p.n; ++k) {
        // (x/2)^{-4z-2k} Itilde_k,  Itilde_k = sum_l q^l rgamma(l+1-2k-2z)/l!
        cplx e_k = -4.0 * z - cplx(2 * k, 0.0);
        cplx pw = std::exp(e_k * lg);
        kahan_sum<cplx> series;
        cplx t = rgamma(1.0 - cplx(2 * k, 0.0) - 2.0 * z);
        for (int l = 0; l < 300; ++l) {
            if (l > 0) t *= q / (static_cast<double>(l) * (cplx(l - 2 * k, 0.0) - 2.0 * z));
            series.add(t);
            if (l > 2 && std::abs(t) < 1e-18 * std::abs(series.value())) break;
        }
        cplx b_k = (cplx(k, 0.0) + z) * rgamma(1.0 - cplx(k, 0.0) - 2.0 * z) / factorial(k);
        cplx contrib = b_k * pw * series.value();
        mag += std::abs(contrib);
        acc.add(contrib);
    }
    cplx tn = tail_series(x, z, p.n, p.tail_tol);
    mag += std::abs(tn);
    acc.add(-tn);
    cplx factor = 2.0 * pi / std::sin(2.0 * pi * z);
    cplx val = factor * acc.value();
    double est = std::abs(factor) * (2e-15 * mag) + 1e-16 * std::abs(val);
    return {val, KernelRegime::small_x_series, est};
}

// ---- exact log-power series at half-integer z = -(2m+1)/2 ----
//
// Psi_m(x) = sum_{rho = m+1}^{inf} (A_rho + B_rho ln(x/2)) (x^2/4)^rho with
// rational A, B built from the integer-order Macdonald expansions
// (Abramowitz & Stegun 9.6.11); the finite polynomial part collapses to
// exact integer combinations P_r evaluated in 128-bit arithmetic.

inline double digamma_posint(int j) {  // psi(j), j >= 1
    double h = 0.0;
    for (int i = 1; i < j; ++i) h += 1.0 / i;
    return -euler_gamma + h;
}

inline double half_integer_P(int r, int m) {
    // P_r = sum_k (-1)^{r-k} (2k-2m-1) C(2m+1,k) (2m-k-r)! r!/(r-k)!  /  ((2m+1)! r!)
    // Exactly zero for 1 <= r <= m and equal to -1 at r = 0.
    __int128 num = 0;
    for (int k = 0; k <= std::min(r, m); ++k) {
        if (r - k > 2 * m - 2 * k) continue;  // (2m-k-r)! would have negative argument
        __int128 t = (2 * k - 2 * m - 1);
        // C(2m+1, k)
        __int128 c = 1;
        for (int j = 1; j <= k; ++j) c = c * (2 * m + 1 - j + 1) / j;
        t *= c;
        for (int j = 2; j <= 2 * m - k - r; ++j) t *= j;  // (2m-k-r)!
        for (int j = r - k + 1; j <= r; ++j) t *= j;      // r!/(r-k)!
        if ((r - k) % 2 != 0) t = -t;
        num += t;
    }
    double denom = 1.0;
    for (int j = 2; j <= 2 * m + 1; ++j) denom *= j;  // (2m+1)!
    for (int j = 2; j <= r; ++j) denom *= j;          // r!
    return static_cast<double>(num) / denom;
}

inline KernelValue psi_half_integer(double x, int m) {
    const double q = 0.25 * x * x;
    const double L = std::log(0.5 * x);
    std::array<double, 9> a{};
    for (int k = 0; k <= m; ++k)
        a[k] = (4.0 * k - 4.0 * m - 2.0) / (factorial(k) * factorial(2 * m + 1 - k));

    kahan_sum<double> acc;
    double qpow = std::pow(q, m + 1);
    double mag = 0.0;
    int quiet = 0;
    for (int rho = m + 1; rho <= m + 48; ++rho) {
        double A = (rho <= 2 * m) ? half_integer_P(rho, m) : 0.0;
        double B = 0.0;
        for (int k = std::max(0, 2 * m + 1 - rho); k <= m; ++k) {
            double d = factorial(rho - 2 * m - 1 + k) * factorial(rho - k);
            B += a[k] / d;
            A -= 0.5 * a[k] *
                 (digamma_posint(rho - 2 * m + k) + digamma_posint(rho - k + 1)) / d;
        }
        double term = (A + B * L) * qpow;
        acc.add(term);
        mag += std::abs(term);
        if (rho > m + 4 &&
            std::abs(term) < 1e-18 * std::max(std::abs(acc.value()), 1e-300)) {
            if (++quiet >= 2) break;
        } else {
            quiet = 0;
        }
        qpow *= q;
    }
    double est = 2e-16 * mag + 1e-16 * std::abs(acc.value());
    return {cplx(acc.value(), 0.0), KernelRegime::extended_precision, est};
}

}  // namespace detail

// Psi_n(x; z) with automatic regime selection.
inline KernelValue psi(double x, const KernelParams& params) {
    params.validate();
    if (!(x > 0.0)) throw domain_error("psi: x must be positive");

    if (x >= params.x_switch) return detail::psi_direct(x, params, /*use_dd=*/false);

    const double sin2z = std::abs(std::sin(2.0 * pi * params.z));
    if (sin2z >= params.sin_threshold) return detail::psi_series(x, params);

    // inside the sine gate: exact half-integer z gets the analytic series
    const double target = -(2.0 * params.n + 1.0) / 2.0;
    const double snap = std::abs(params.z - cplx(target, 0.0));
    if (snap < 1e-9) {
        KernelValue v = detail::psi_half_integer(x, params.n);
        v.est_error += 30.0 * snap * std::abs(v.psi);  // series is for z snapped to target
        return v;
    }
    return detail::psi_direct(x, params, /*use_dd=*/true);
}

}  // namespace klg
