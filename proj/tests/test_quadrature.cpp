#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "klgamma/quadrature.hpp"

using namespace klg;

TEST_CASE("semi-infinite rule reproduces classical integrals", "[quadrature]") {
    QuadratureSpec spec;

    SECTION("int_0^inf e^{-x} dx = 1") {
        auto r = integrate_semi_infinite([](double x) { return std::exp(-x); }, 0.0, spec);
        REQUIRE(r.converged);
        CHECK(r.value == Catch::Approx(1.0).epsilon(1e-12));
        CHECK(r.error_estimate < 1e-10);
    }
    SECTION("int_0^inf x^{-1/2} e^{-x} dx = sqrt(pi)") {
        auto r = integrate_semi_infinite(
            [](double x) { return std::exp(-x) / std::sqrt(x); }, -0.5, spec);
        REQUIRE(r.converged);
        CHECK(r.value == Catch::Approx(std::sqrt(pi)).epsilon(1e-12));
    }
    SECTION("int_0^inf x^3 e^{-x} dx = 6") {
        auto r = integrate_semi_infinite(
            [](double x) { return x * x * x * std::exp(-x); }, 3.0, spec);
        REQUIRE(r.converged);
        CHECK(r.value == Catch::Approx(6.0).epsilon(1e-12));
    }
    SECTION("int_0^inf x^{0.7} e^{-2x} dx = Gamma(1.7)/2^{1.7}") {
        auto r = integrate_semi_infinite(
            [](double x) { return std::pow(x, 0.7) * std::exp(-2.0 * x); }, 0.7, spec);
        REQUIRE(r.converged);
        CHECK(r.value ==
              Catch::Approx(std::tgamma(1.7) / std::pow(2.0, 1.7)).epsilon(1e-12));
    }
    SECTION("complex-valued integrand") {
        auto r = integrate_semi_infinite<cplx>(
            [](double x) { return cplx(std::exp(-x), x * std::exp(-x)); }, 0.0, spec);
        REQUIRE(r.converged);
        CHECK(r.value.real() == Catch::Approx(1.0).epsilon(1e-12));
        CHECK(r.value.imag() == Catch::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("semi-infinite rule argument checking", "[quadrature]") {
    QuadratureSpec spec;
    auto f = [](double x) { return std::exp(-x); };
    CHECK_THROWS_AS(integrate_semi_infinite(f, -1.0, spec), domain_error);
    CHECK_THROWS_AS(integrate_semi_infinite(f, -1.5, spec), domain_error);

    QuadratureSpec bad = spec;
    bad.max_level = 0;
    CHECK_THROWS_AS(integrate_semi_infinite(f, 0.0, bad), domain_error);
    bad = spec;
    bad.max_evals = 4;
    CHECK_THROWS_AS(integrate_semi_infinite(f, 0.0, bad), domain_error);
    bad = spec;
    bad.abs_tol = 0.0;
    bad.rel_tol = 0.0;
    CHECK_THROWS_AS(integrate_semi_infinite(f, 0.0, bad), domain_error);
}

TEST_CASE("non-finite integrand values are reported", "[quadrature]") {
    QuadratureSpec spec;
    auto f = [](double x) { return std::sqrt(1.0 - x) * std::exp(-x); };  // NaN for x > 1
    CHECK_THROWS_AS(integrate_semi_infinite(f, 0.0, spec), evaluation_failure);
}

TEST_CASE("budget exhaustion degrades softly", "[quadrature]") {
    QuadratureSpec spec;
    spec.max_evals = 20;
    spec.abs_tol = 1e-15;
    spec.rel_tol = 0.0;
    auto r = integrate_semi_infinite([](double x) { return std::exp(-x); }, 0.0, spec);
    CHECK_FALSE(r.converged);
    CHECK(r.evaluations <= 22 + 2);  // a few nodes of slack at the boundary
}

TEST_CASE("tolerance refinement tightens the result", "[quadrature][property]") {
    QuadratureSpec loose, tight;
    loose.abs_tol = loose.rel_tol = 1e-5;
    tight.abs_tol = tight.rel_tol = 1e-13;
    auto f = [](double x) { return std::exp(-x) * std::cos(x) * std::cos(x); };
    auto rl = integrate_semi_infinite(f, 0.0, loose);
    auto rt = integrate_semi_infinite(f, 0.0, tight);
    const double exact = 0.5 + 0.5 / 5.0;  // int e^{-x} cos^2 = 1/2 + (1/2)(1/5)
    REQUIRE(rl.converged);
    REQUIRE(rt.converged);
    CHECK(std::abs(rl.value - exact) < 1e-4);
    CHECK(std::abs(rt.value - exact) < 1e-12);
    CHECK(rt.evaluations >= rl.evaluations);
}

TEST_CASE("even real-line rule", "[quadrature]") {
    QuadratureSpec spec;

    SECTION("Gaussian: int e^{-s^2} ds = sqrt(pi)") {
        auto r = integrate_even_real_line(
            [](double s) { return std::exp(-s * s); }, 9.0, spec);
        REQUIRE(r.converged);
        CHECK(r.value == Catch::Approx(std::sqrt(pi)).epsilon(1e-12));
    }
    SECTION("int sech(pi s) ds = 1") {
        auto r = integrate_even_real_line(
            [](double s) { return 1.0 / std::cosh(pi * s); }, 14.0, spec);
        REQUIRE(r.converged);
        CHECK(r.value == Catch::Approx(1.0).epsilon(1e-12));
    }
    SECTION("oscillatory with frequency hint: int cos(3s) e^{-s^2} ds") {
        auto r = integrate_even_real_line(
            [](double s) { return std::cos(3.0 * s) * std::exp(-s * s); }, 9.0, spec, 3.0);
        REQUIRE(r.converged);
        CHECK(r.value == Catch::Approx(std::sqrt(pi) * std::exp(-2.25)).epsilon(1e-11));
    }
    SECTION("domain checks") {
        auto f = [](double s) { return std::exp(-s * s); };
        CHECK_THROWS_AS(integrate_even_real_line(f, 0.0, spec), domain_error);
        CHECK_THROWS_AS(integrate_even_real_line(f, -3.0, spec), domain_error);
    }
}

TEST_CASE("even real-line rule matches brute-force trapezoid", "[quadrature][property]") {
    QuadratureSpec spec;
    auto f = [](double s) { return std::exp(-s * s) / (1.0 + s * s); };
    const double S = 8.0;
    auto r = integrate_even_real_line(f, S, spec);
    REQUIRE(r.converged);

    const double h = 1e-4;
    kahan_sum<double> trap;
    trap.add(0.5 * f(0.0));
    const long nsteps = static_cast<long>(S / h);
    for (long k = 1; k < nsteps; ++k) trap.add(f(k * h));
    trap.add(0.5 * f(S));
    double brute = 2.0 * h * trap.value();
    CHECK(std::abs(r.value - brute) < 1e-8);
}
