#pragma once

// Complex Gamma function (Lanczos), log-Gamma safe for large imaginary parts,
// entire reciprocal Gamma, the conjugate product Gamma(z+is) Gamma(z-is), the
// reflection form of 1/Gamma used by the tail series, and Pochhammer symbols.

#include "klgamma/common.hpp"

namespace klg {
namespace detail {

// Lanczos rational approximation, g = 607/128, 15 terms (Godfrey's
// coefficients; relative error below 1e-15 on Re w >= 1/2).
inline constexpr double lanczos_g = 4.7421875;
inline constexpr double lanczos_c[15] = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    3.3994649984811888699e-5,
    4.6523628927048575665e-5,   -9.8374475304879564677e-5,
    1.5808870322491248884e-4,   -2.1026444172410488319e-4,
    2.1743961811521264320e-4,   -1.6431810653676389022e-4,
    8.4418223983852743293e-5,   -2.6190838401581408670e-5,
    3.6899182659531622704e-6};

inline cplx lanczos_sum(cplx w) {
    cplx s(lanczos_c[0], 0.0);
    for (int k = 1; k < 15; ++k) s += lanczos_c[k] / (w + cplx(k - 1, 0.0));
    return s;
}

// log(sin(pi w)) without overflow for large |Im w| (principal-ish branch;
// only Re and exp of the result are consumed downstream).
inline cplx log_sin_pi(cplx w) {
    const double y = w.imag();
    if (std::abs(y) <= 20.0) return std::log(std::sin(pi * w));
    const cplx i(0.0, 1.0);
    const cplx ln2i = cplx(std::log(2.0), 0.5 * pi);
    if (y > 0.0)  // sin(pi w) = -e^{-i pi w}/(2i) (1 - e^{2 i pi w})
        return -i * pi * w - ln2i + std::log(1.0 - std::exp(2.0 * i * pi * w)) + cplx(0.0, pi);
    return i * pi * w - ln2i + std::log(1.0 - std::exp(-2.0 * i * pi * w));
}

}  // namespace detail

// Gamma(w).  Throws pole_error within 1e-14 of a nonpositive integer and
// overflow_error if the result exceeds double range.  Real w yields an
// exactly real result.
inline cplx cgamma(cplx w) {
    const double re = w.real();
    if (re <= 0.5) {
        const double r = std::round(re);
        if (r <= 0.0 && std::abs(w - cplx(r, 0.0)) <= 1e-14)
            throw pole_error("Gamma pole at w = " + std::to_string(static_cast<long>(r)));
    }
    cplx result;
    if (re < 0.5) {
        // reflection: Gamma(w) = pi / (sin(pi w) Gamma(1 - w))
        result = pi / (std::sin(pi * w) * cgamma(1.0 - w));
    } else {
        const cplx t = w + cplx(detail::lanczos_g - 0.5, 0.0);
        result = std::sqrt(2.0 * pi) * std::pow(t, w - 0.5) * std::exp(-t) *
                 detail::lanczos_sum(w);
    }
    if (!is_finite(result))
        throw overflow_error("Gamma overflow at |w| = " + std::to_string(std::abs(w)));
    return result;
}

// log Gamma(w), safe for large |Im w| (no intermediate overflow).  The
// imaginary part is not reduced to a principal branch; callers use only the
// real part and exp of the result.
inline cplx lgamma_complex(cplx w) {
    const double re = w.real();
    if (re <= 0.5) {
        const double r = std::round(re);
        if (r <= 0.0 && std::abs(w - cplx(r, 0.0)) <= 1e-14)
            throw pole_error("Gamma pole at w = " + std::to_string(static_cast<long>(r)));
    }
    if (re < 0.5)
        return std::log(cplx(pi, 0.0)) - detail::log_sin_pi(w) - lgamma_complex(1.0 - w);
    const cplx t = w + cplx(detail::lanczos_g - 0.5, 0.0);
    return 0.5 * std::log(2.0 * pi) + (w - 0.5) * std::log(t) - t +
           std::log(detail::lanczos_sum(w));
}

// 1/Gamma(w): entire, returns 0 at the poles of Gamma, never throws.
inline cplx rgamma(cplx w) {
    if (w.real() < 0.5) {
        if (w.imag() == 0.0 && w.real() == std::round(w.real()) && w.real() <= 0.0)
            return cplx(0.0, 0.0);  // exact zero of 1/Gamma
        return std::sin(pi * w) * cgamma(1.0 - w) / pi;
    }
    return 1.0 / cgamma(w);
}

// Gamma(z + is) Gamma(z - is).  For real z this is |Gamma(z + is)|^2: the
// result is clamped exactly real (and is strictly positive).  Pole checks
// happen in cgamma for both factors.
inline cplx gamma_pair(cplx z, double s) {
    if (z.imag() == 0.0) {
        if (s == 0.0) {
            cplx g = cgamma(z);
            return g * g;
        }
        cplx g = cgamma(z + cplx(0.0, s));
        return cplx(std::norm(g), 0.0);
    }
    return cgamma(z + cplx(0.0, s)) * cgamma(z - cplx(0.0, s));
}

// 1/Gamma(k + l + 2z + 1) in the reflection form
//     -(-1)^{k+l} sin(2 pi z) / pi * Gamma(-2z - k - l),
// which is how the tail-series coefficients arise.  Where the Gamma factor
// degenerates (argument within 1e-9 of a nonpositive integer) the entire
// reciprocal is used instead, so this never throws: 1/Gamma has zeros, not
// poles, there.
inline cplx reflection_gamma(int k, int l, cplx z) {
    const cplx m = cplx(k + l + 1, 0.0) + 2.0 * z;
    // 2z within snap distance of an integer: the product sin(2 pi z) *
    // Gamma(-2z-k-l) is a degenerate 0 * finite or 0 * inf form; the entire
    // reciprocal evaluates it cleanly (exact 0 at nonpositive integer m).
    if (std::abs(m.imag()) < 1e-9 && dist_to_integer(m.real()) < 1e-9)
        return rgamma(m);
    const double sign = (((k + l) % 2) == 0) ? -1.0 : 1.0;
    return sign * std::sin(2.0 * pi * z) / pi * cgamma(-2.0 * z - cplx(k + l, 0.0));
}

// Pochhammer symbol (a)_m = a (a+1) ... (a+m-1), (a)_0 = 1.
inline cplx pochhammer(cplx a, int m) {
    if (m < 0) throw domain_error("pochhammer: order must be nonnegative");
    cplx p(1.0, 0.0);
    for (int j = 0; j < m; ++j) p *= a + cplx(j, 0.0);
    return p;
}

}  // namespace klg
