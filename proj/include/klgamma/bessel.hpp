#pragma once

// Modified Bessel functions for complex order and positive real argument.
//
//  * bessel_i: ascending series (x <= 40, or whenever the order is too large
//    for the asymptotic expansion), else the large-x expansion with adaptive
//    term count.  The series is used up to x = 700; beyond that I overflows
//    double range.
//  * bessel_k: direct quadrature of the integral representation
//        K_w(x) = int_0^inf exp(-x cosh t) cosh(w t) dt
//    truncated where the integrand underflows relative to its peak, with
//    oscillation-aware panel widths for imaginary order parts.
//  * bessel_k_via_connection: pi/(2 sin(pi nu)) (I_{-nu} - I_nu), guarded
//    against near-integer orders where the connection formula degenerates.
//  * bessel_k_imag_scaled: e^{pi u/2} K_{iu}(y) through a scaled power
//    series, stable for u up to several thousand (spectral transforms).
//
// Scaled variants carrying e^{-x} I and e^{x} K are provided for tail
// formulas that only consume I*K products.

#include "klgamma/common.hpp"
#include "klgamma/gamma.hpp"
#include "klgamma/quadrature.hpp"

namespace klg {
namespace detail {

inline constexpr double order_cap = 200.0;  // validated envelope for |order|

inline void check_bessel_args(cplx order, double x, const char* who) {
    if (!(x > 0.0))
        throw domain_error(std::string(who) + ": argument x must be positive");
    if (std::abs(order) > order_cap)
        throw range_error(std::string(who) + ": |order| exceeds validated envelope 200");
}

// Ascending series I_nu(x) = (x/2)^nu sum_l (x^2/4)^l / (l! Gamma(nu+l+1)).
// For orders within 1e-12 of an integer the symmetric form I_{|m|} is used
// (the generic prefactor splitting degenerates into inf * 0 there).
inline cplx bessel_i_series(cplx nu, double x, bool scaled) {
    const double q = 0.25 * x * x;
    const double rnu = std::round(nu.real());
    if (std::abs(nu - cplx(rnu, 0.0)) <= 1e-12 && dist_to_integer(nu.real()) <= 1e-12) {
        const int m = static_cast<int>(std::abs(rnu));
        kahan_sum<double> acc;
        double t = 1.0;
        for (int j = 1; j <= m; ++j) t *= x / (2.0 * j);  // (x/2)^m / m!
        for (int l = 0; l < 900; ++l) {
            if (l > 0) t *= q / (l * (l + m));
            acc.add(t);
            if (l > 2 && std::abs(t) < 1e-17 * std::abs(acc.value())) break;
        }
        double v = acc.value();
        if (scaled) v *= std::exp(-x);
        if (!std::isfinite(v)) throw overflow_error("bessel_i overflow");
        return cplx(v, 0.0);
    }

    const cplx log_pref = nu * std::log(0.5 * x);
    if (log_pref.real() > 705.0)
        throw overflow_error("bessel_i: result exceeds double range");
    kahan_sum<cplx> acc;
    cplx t = rgamma(nu + 1.0);
    for (int l = 0; l < 900; ++l) {
        if (l > 0) t *= q / (static_cast<double>(l) * (nu + cplx(l, 0.0)));
        acc.add(t);
        if (l > 2 && std::abs(t) < 1e-17 * std::abs(acc.value())) break;
    }
    cplx pref = std::exp(scaled ? log_pref - x : log_pref);
    cplx v = pref * acc.value();
    if (!is_finite(v)) throw overflow_error("bessel_i overflow");
    return v;
}

// Large-x expansion with adaptive truncation; requires |nu|^2 <= x/8, where
// the optimally truncated error is below 1e-14 for x > 40.
inline cplx bessel_i_asymptotic(cplx nu, double x, bool scaled) {
    const cplx mu = 4.0 * nu * nu;
    cplx s(1.0, 0.0), t(1.0, 0.0);
    double prev = 1.0;
    for (int k = 1; k <= 14; ++k) {
        t *= -(mu - cplx((2 * k - 1) * (2 * k - 1), 0.0)) / (k * 8.0 * x);
        double m = std::abs(t);
        if (m > prev) break;  // divergence onset
        s += t;
        if (m < 1e-17 * std::abs(s)) break;
        prev = m;
    }
    double pref = scaled ? 1.0 / std::sqrt(2.0 * pi * x)
                         : std::exp(x) / std::sqrt(2.0 * pi * x);
    cplx v = pref * s;
    if (!is_finite(v)) throw overflow_error("bessel_i overflow");
    return v;
}

inline cplx bessel_i_impl(cplx nu, double x, bool scaled) {
    check_bessel_args(nu, x, "bessel_i");
    if (x > 700.0)
        throw overflow_error("bessel_i: x > 700 exceeds double range");
    if (x > 40.0 && std::norm(nu) <= x / 8.0)
        return bessel_i_asymptotic(nu, x, scaled);
    return bessel_i_series(nu, x, scaled);
}

// Truncation point for the K integrand exp(-x cosh t) cosh(w t): beyond the
// peak t* = asinh(a/x), a = |Re w|, solve  x cosh T - a T = x cosh t* - a t* + L.
// L = 746: for small orders this reduces to T = arccosh(1 + 746/x), the point
// where exp(-x cosh t) underflows double range.
inline double k_truncation(double a, double x) {
    const double L = 746.0;
    const double tstar = std::asinh(a / x);
    const double peak_log = x * std::cosh(tstar) - a * tstar;
    auto g = [&](double t) { return x * std::cosh(t) - a * t - peak_log - L; };
    double lo = tstar, hi = std::max(tstar + 1.0, std::asinh((a + L) / x) + 1.0);
    while (g(hi) < 0.0) hi += 2.0;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// e^{x} K_w(x) by adaptive panel quadrature of the scaled integrand.
inline cplx bessel_k_scaled_impl(cplx w, double x) {
    check_bessel_args(w, x, "bessel_k");
    const double a = std::abs(w.real());   // K is even in its order
    const double b = std::abs(w.imag());
    const double T = k_truncation(a, x);
    const double tstar = std::asinh(a / x);
    const double peak_log = x * (std::cosh(tstar) - 1.0) - a * tstar;  // scaled peak
    if (-peak_log > 705.0)
        throw overflow_error("bessel_k: scaled result exceeds double range");
    auto f = [&](double t) -> cplx {
        // cosh t - 1 = 2 sinh^2(t/2): the difference form loses all accuracy
        // for x >> 1 (x * eps noise per node), the product form stays clean
        const double sh = std::sinh(0.5 * t);
        return std::exp(cplx(-2.0 * x * sh * sh, 0.0)) * std::cosh(w * t);
    };
    // target ~1e-14 relative against the peak magnitude of the integrand;
    // the floor keeps the density above the per-node rounding noise, which
    // bisection cannot reduce: the exponent contributes ~eps * a near the
    // peak and the cosh(w t) factor ~eps * |w| t from rounding its argument
    const double peak_mag = std::exp(-peak_log);
    const double base = std::max(peak_mag, 1e-280);
    const double noise_density = (4.0 + 3.0 * a + (a + b) * T) * 2.4e-16;
    const double tol_density = std::max(1e-15 / std::max(T, 1.0), noise_density) * base;
    const double width = std::min(1.0, pi / (2.0 * b + 1.0));
    long evals = 0;
    kahan_sum<cplx> acc;
    kahan_sum<double> err_acc;
    double lo = 0.0;
    while (lo < T) {
        double hi = std::min(lo + width, T);
        auto p = integrate_panels<cplx>(f, lo, hi, tol_density, evals, 40000000L);
        acc.add(p.value);
        err_acc.add(p.err);
        lo = hi;
    }
    cplx v = acc.value();
    if (!is_finite(v)) throw overflow_error("bessel_k overflow");
    return v;
}

}  // namespace detail

// I_nu(x).  Errors: x <= 0 domain, x > 700 overflow, |nu| > 200 range.
inline cplx bessel_i(cplx order, double x) {
    return detail::bessel_i_impl(order, x, /*scaled=*/false);
}

// e^{-x} I_nu(x).
inline cplx bessel_i_scaled(cplx order, double x) {
    return detail::bessel_i_impl(order, x, /*scaled=*/true);
}

// e^{x} K_w(x).
inline cplx bessel_k_scaled(cplx order, double x) {
    return detail::bessel_k_scaled_impl(order, x);
}

double bessel_k_imag_scaled(double u, double y);

// K_w(x).  x >= 746 underflows to exact 0.  For x < 1e-6 with |Re w| > 0 the
// quadrature loses relative accuracy; the optional flag reports that.
// Purely imaginary orders iu with u >= 1/2 route through the scaled series:
// K_{iu}(x) ~ e^{-pi u/2} is far below the oscillatory-cancellation floor of
// the direct quadrature once u is large.
inline cplx bessel_k(cplx order, double x, bool* accuracy_warning = nullptr) {
    detail::check_bessel_args(order, x, "bessel_k");
    if (accuracy_warning) *accuracy_warning = (x < 1e-6 && std::abs(order.real()) > 0.0);
    if (x >= 746.0) return cplx(0.0, 0.0);
    const double u = std::abs(order.imag());
    if (order.real() == 0.0 && u >= 0.5 && x <= 6.0)
        return cplx(bessel_k_imag_scaled(u, x) * std::exp(-0.5 * pi * u), 0.0);
    cplx scaled = detail::bessel_k_scaled_impl(order, x);
    return scaled * std::exp(-x);
}

// K_nu(x) = pi/(2 sin(pi nu)) (I_{-nu}(x) - I_nu(x)).  Near-integer orders
// degenerate (the two I's coincide); refused below |sin(pi nu)| = 1e-3.
inline cplx bessel_k_via_connection(cplx nu, double x) {
    detail::check_bessel_args(nu, x, "bessel_k_via_connection");
    cplx sn = std::sin(pi * nu);
    if (std::abs(sn) < 1e-3)
        throw connection_degenerate_error(
            "bessel_k_via_connection: sin(pi*order) below 1e-3 near order = " +
            std::to_string(nu.real()));
    return 0.5 * pi / sn * (bessel_i(-nu, x) - bessel_i(nu, x));
}

// e^{pi u / 2} K_{iu}(y) for u >= 0, evaluated through the scaled series
//   K_{iu}(y) = -pi Im I_{iu}(y) / sinh(pi u),
//   I_{iu}(y) = sum_l (y^2/4)^l / l! * B_l,   B_l = B_{l-1} / (l + iu),
//   B_0 = exp(iu ln(y/2) - lnGamma(1 + iu)),
// with every factor kept at unit scale (valid for u into the thousands).
// Below u = 0.5 the Im-extraction cancels, so the quadrature path is used.
inline double bessel_k_imag_scaled(double u, double y) {
    if (!(y > 0.0)) throw domain_error("bessel_k_imag_scaled: y must be positive");
    if (!(u >= 0.0)) throw domain_error("bessel_k_imag_scaled: u must be nonnegative");
    if (u < 0.5) {
        cplx k = detail::bessel_k_scaled_impl(cplx(0.0, u), y);
        return std::exp(0.5 * pi * u - y) * k.real();
    }
    const double q = 0.25 * y * y;
    // B_0 = exp(-pi u/2 + iu ln(y/2) - lnGamma(1+iu)): the -pi u/2 cancels the
    // e^{+pi u/2} growth of 1/|Gamma(1+iu)|, so |B_0| ~ (2 pi u)^{-1/2} stays
    // at unit scale for arbitrarily large u.
    cplx lg = lgamma_complex(cplx(1.0, u));
    cplx b = std::exp(cplx(-0.5 * pi * u, u * std::log(0.5 * y)) - lg);
    kahan_sum<cplx> acc;
    double coef = 1.0;  // q^l / l!, bounded by e^q
    for (int l = 0; l < 200; ++l) {
        if (l > 0) {
            b /= cplx(l, u);
            coef *= q / l;
        }
        cplx term = coef * b;
        acc.add(term);
        if (l > 3 && std::abs(term) < 1e-18 * std::abs(acc.value())) break;
    }
    double denom = -std::expm1(-2.0 * pi * u);  // 1 - e^{-2 pi u}
    return -2.0 * pi * acc.value().imag() / denom;
}

}  // namespace klg
