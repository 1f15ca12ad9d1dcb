#pragma once

// Shared basics: complex alias, error taxonomy, compensated accumulators.
// Every exception message names the violated precondition so CLI diagnostics
// can be emitted verbatim.

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace klg {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double euler_gamma = 0.577215664901532860606512090082402431;

// ---------------------------------------------------------------------------
// Error taxonomy
// ---------------------------------------------------------------------------

// Argument outside the mathematical domain of an operation.
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Evaluation requested at (or within snap distance of) a pole.
struct pole_error : domain_error {
    using domain_error::domain_error;
};

// Result magnitude not representable in double.
struct overflow_error : domain_error {
    using domain_error::domain_error;
};

// (z, n) does not satisfy the half-strip constraint -n-1 < Re z < -n.
struct strip_mismatch_error : domain_error {
    using domain_error::domain_error;
};

// Connection formula degenerates: sin(pi*order) too close to zero.
struct connection_degenerate_error : domain_error {
    using domain_error::domain_error;
};

// sin(2*pi*z) below the configured threshold where a formula divides by it.
struct degenerate_sine_error : domain_error {
    using domain_error::domain_error;
};

// Requested argument lies outside the validated envelope (not a math error).
struct range_error : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Integrand returned a non-finite value, or an internal solve failed.
struct evaluation_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Compensated accumulation
// ---------------------------------------------------------------------------

// Kahan-Neumaier compensated sum.  Works for double and std::complex<double>
// (the compensation recurrence is componentwise-linear).
template <typename T>
struct kahan_sum {
    T sum{};
    T comp{};

    void add(T v) {
        T t = sum + v;
        // Neumaier branchless variant is awkward for complex; plain Kahan is
        // adequate: terms here never exceed the running sum by many orders.
        comp += (sum - t) + v;
        sum = t;
    }
    T value() const { return sum + comp; }
};

// Minimal double-double value for the few spots that need ~30 significant
// digits of accumulation (extended-precision kernel fallback).  Only the
// operations used there are provided.
struct dd {
    double hi = 0.0, lo = 0.0;

    dd() = default;
    dd(double h) : hi(h), lo(0.0) {}
    dd(double h, double l) : hi(h), lo(l) {}

    static dd two_sum(double a, double b) {
        double s = a + b;
        double bb = s - a;
        double err = (a - (s - bb)) + (b - bb);
        return {s, err};
    }
    static dd two_prod(double a, double b) {
        double p = a * b;
        double err = std::fma(a, b, -p);
        return {p, err};
    }

    dd operator+(const dd& o) const {
        dd s = two_sum(hi, o.hi);
        double lo2 = s.lo + lo + o.lo;
        dd r = two_sum(s.hi, lo2);
        return r;
    }
    dd operator-(const dd& o) const { return *this + dd(-o.hi, -o.lo); }
    dd operator*(const dd& o) const {
        dd p = two_prod(hi, o.hi);
        p.lo += hi * o.lo + lo * o.hi;
        dd r = two_sum(p.hi, p.lo);
        return r;
    }
    dd operator*(double s) const { return *this * dd(s); }
    double to_double() const { return hi + lo; }
};

// Complex double-double: enough for compensated Macdonald sums.
struct ddcplx {
    dd re, im;
    ddcplx() = default;
    ddcplx(dd r, dd i) : re(r), im(i) {}
    ddcplx(cplx z) : re(z.real()), im(z.imag()) {}
    ddcplx operator+(const ddcplx& o) const { return {re + o.re, im + o.im}; }
    ddcplx operator*(const ddcplx& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    cplx to_cplx() const { return {re.to_double(), im.to_double()}; }
};

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

inline bool is_finite(cplx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Distance from x to the nearest integer.
inline double dist_to_integer(double x) { return std::abs(x - std::round(x)); }

// Factorial as double (exact through 22!).
inline double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace klg
