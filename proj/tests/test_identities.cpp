#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "klgamma/identities.hpp"

using klg::cplx;

namespace {

double rel(cplx got, cplx want) {
    return std::abs(got - want) /
           std::max({std::abs(got), std::abs(want), 1e-300});
}

constexpr double four_pi = 12.566370614359173;
constexpr double pi_over_sinh_pi = 0.27202905498213316;
constexpr double four_pi_over_5cosh_pi = 0.21681196111953468;
constexpr double gamma_quarter_neg = -4.9016668098607106;  // Gamma(-1/4)

}  // namespace

// ---------------------------------------------------------------------------
// Gamma-pair representations
// ---------------------------------------------------------------------------

TEST_CASE("classic representation reproduces the gamma pair", "[identities][kl]") {
    // Gamma(1)^2 = 1 and |Gamma(1+i)|^2 = pi/sinh(pi)
    CHECK(std::abs(klg::kl_classic_rhs({1.0, 0.0}, 0.0) - cplx(1.0, 0.0)) < 1e-11);
    CHECK(rel(klg::kl_classic_rhs({1.0, 0.0}, 1.0), {pi_over_sinh_pi, 0.0}) < 1e-10);
    // Gamma(1/2)^2 = pi
    CHECK(rel(klg::kl_classic_rhs({0.5, 0.0}, 0.0), {klg::pi, 0.0}) < 1e-10);

    for (const auto& p : klg::VerifyGrid::builtin("all").classic) {
        CAPTURE(p.z, p.s);
        auto r = klg::kl_classic(p.z, p.s);
        CHECK(r.converged);
        CHECK(rel(r.value, klg::gamma_pair(p.z, p.s)) < 1e-9);
    }
}

TEST_CASE("extended representation matches on the left strips",
          "[identities][kl]") {
    // Gamma(-1/2)^2 = 4 pi and |Gamma(-1/2+i)|^2 = 4 pi / (5 cosh pi)
    CHECK(rel(klg::kl_extended_rhs({-0.5, 0.0}, 0.0, 0), {four_pi, 0.0}) < 1e-9);
    CHECK(rel(klg::kl_extended_rhs({-0.5, 0.0}, 1.0, 0),
              {four_pi_over_5cosh_pi, 0.0}) < 1e-9);

    struct Pt {
        cplx z;
        double s;
        int n;
        double tol;
    };
    const Pt pts[] = {
        {{-0.25, 0.0}, 0.5, 0, 1e-8},  {{-0.75, 0.0}, 2.0, 0, 1e-8},
        {{-1.5, 0.0}, 1.0, 1, 1e-8},   {{-2.5, 0.0}, 0.5, 2, 1e-8},
        {{-0.25, 0.0}, 5.0, 0, 1e-7},  {{-2.5, 0.0}, 5.0, 2, 1e-7},
        {{-0.3, 0.4}, 0.5, 0, 1e-6},   {{-1.5, 0.2}, 2.0, 1, 1e-6},
    };
    for (const auto& p : pts) {
        CAPTURE(p.z, p.s, p.n);
        auto r = klg::kl_extended(p.z, p.s, p.n);
        CHECK(r.converged);
        CHECK(rel(r.value, klg::gamma_pair(p.z, p.s)) < p.tol);
    }
}

TEST_CASE("mixed representation agrees with the gamma pair and the strips",
          "[identities][kl]") {
    // Gamma(-1/4)^2 at s = 0
    const double g2 = gamma_quarter_neg * gamma_quarter_neg;
    CHECK(rel(klg::kl_mixed_rhs({-0.25, 0.0}, 0.0, 0), {g2, 0.0}) < 1e-8);

    struct Pt {
        cplx z;
        double s;
        int n;
        double tol;
    };
    const Pt pts[] = {
        {{-0.25, 0.0}, 5.0, 0, 1e-7},  // |Gamma|^2 ~ 8.5e-8: exp-small target
        {{-0.75, 0.0}, 1.0, 0, 1e-8},
        {{0.5, 0.5}, 1.0, 0, 1e-8},
        {{-0.3, 0.4}, 0.5, 0, 1e-7},
        {{-1.5, 0.2}, 2.0, 1, 1e-6},
    };
    for (const auto& p : pts) {
        CAPTURE(p.z, p.s, p.n);
        auto r = klg::kl_mixed(p.z, p.s, p.n);
        CHECK(r.converged);
        CHECK(rel(r.value, klg::gamma_pair(p.z, p.s)) < p.tol);
    }

    // residue form and tempered-kernel form agree where both apply
    cplx mixed = klg::kl_mixed_rhs({-0.25, 0.0}, 1.0, 0);
    cplx extended = klg::kl_extended_rhs({-0.25, 0.0}, 1.0, 0);
    CHECK(rel(mixed, extended) < 1e-8);
}

TEST_CASE("mellin pair integrates to its algebraic value",
          "[identities][mellin]") {
    CHECK(klg::mellin_closed({1.0, 0.0}, 0, 0.0) == cplx(1.0, 0.0));
    for (const auto& p : klg::VerifyGrid::builtin("mellin").mellin) {
        CAPTURE(p.z, p.k, p.s);
        auto r = klg::mellin_ki(p.z, p.k, p.s);
        CHECK(r.converged);
        CHECK(rel(r.value, klg::mellin_closed(p.z, p.k, p.s)) < 1e-9);
    }
}

// ---------------------------------------------------------------------------
// Fourier transform of the gamma pair
// ---------------------------------------------------------------------------

TEST_CASE("fourier transform matches frozen references", "[identities][fourier]") {
    struct Row {
        double a, xi, want;
        int n;
    };
    // int_R e^{i xi s} |Gamma(a+is)|^2 ds, mpmath, 17 digits
    const Row rows[] = {
        {-0.25, 0.0, 13.047404083208823, 0},
        {-0.25, 1.0, 12.497033641216449, 0},
        {-0.25, 2.0, 11.103347933180060, 0},
        {-0.25, 4.0, 7.6419479551759566, 0},
        {-0.75, 0.0, 12.301210538824011, 0},
        {-0.75, 1.0, 11.841341519387085, 0},
        {-0.75, 2.0, 10.643471667661677, 0},
        {-0.75, 4.0, 7.4920169765252182, 0},
        {-1.5, 0.0, 3.7125011384164102, 1},
        {-1.5, 1.0, 3.5403255796998317, 1},
        {-1.5, 2.0, 3.0908947573181444, 1},
        {-1.5, 4.0, 1.9284111699315166, 1},
    };
    for (const auto& r : rows) {
        CAPTURE(r.a, r.xi);
        auto direct = klg::fourier_gamma_direct(r.a, r.xi);
        CHECK(direct.converged);
        CHECK(rel(direct.value, r.want) < 1e-9);
        auto repr = klg::fourier_gamma_repr(r.a, r.xi, r.n);
        CHECK(repr.converged);
        CHECK(rel(repr.value, r.want) < 1e-8);
    }

    // the transform is even in xi
    CHECK(std::abs(klg::fourier_gamma_direct(-0.25, 1.5).value -
                   klg::fourier_gamma_direct(-0.25, -1.5).value) < 1e-12);
}

TEST_CASE("ramanujan closed form certifies the direct transform",
          "[identities][fourier]") {
    struct Row {
        double a, xi, want;
    };
    const Row rows[] = {
        {0.5, 0.0, 3.1415926535897932}, {0.5, 1.0, 2.7860236909450834},
        {0.5, 3.0, 1.3354785804448183}, {1.0, 0.0, 1.5707963267948966},
        {1.0, 1.0, 1.2353492101590525}, {1.0, 3.0, 0.28385332464871880},
        {2.0, 0.0, 2.3561944901923449}, {2.0, 1.0, 1.4573063786262538},
        {2.0, 3.0, 0.076941270366859818},
    };
    for (const auto& r : rows) {
        CAPTURE(r.a, r.xi);
        CHECK(rel(klg::ramanujan_closed(r.a, r.xi), r.want) < 1e-14);
        CHECK(rel(klg::fourier_gamma_direct(r.a, r.xi).value, r.want) < 1e-9);
    }
}

TEST_CASE("half-strip closed form certifies both transform routes",
          "[identities][fourier]") {
    struct Row {
        double xi, want;
    };
    const Row rows[] = {
        {0.0, 8.7103443612144085},
        {1.0, 8.2499145782379885},
        {2.0, 7.0841607062366631},
        {4.0, 4.2594234334698247},
    };
    for (const auto& r : rows) {
        CAPTURE(r.xi);
        CHECK(rel(klg::fourier_half_closed(r.xi), r.want) < 1e-14);
        CHECK(rel(klg::fourier_gamma_direct(-0.5, r.xi).value, r.want) < 1e-8);
        CHECK(rel(klg::fourier_gamma_repr(-0.5, r.xi, 0).value, r.want) < 1e-8);
    }
    // 4 pi log 2 at xi = 0
    CHECK(rel(klg::fourier_half_closed(0.0), four_pi * std::log(2.0)) < 1e-15);
}

// ---------------------------------------------------------------------------
// Preconditions
// ---------------------------------------------------------------------------

TEST_CASE("identity preconditions are enforced", "[identities][errors]") {
    CHECK_THROWS_AS(klg::kl_classic({-0.5, 0.0}, 1.0), klg::domain_error);
    CHECK_THROWS_AS(klg::kl_classic({1.0, 11.0}, 1.0), klg::range_error);
    CHECK_THROWS_AS(klg::kl_classic({1.0, 0.0}, 51.0), klg::range_error);

    CHECK_THROWS_AS(klg::kl_extended({-0.5, 0.0}, 1.0, 1),
                    klg::strip_mismatch_error);
    CHECK_THROWS_AS(klg::kl_extended({-1.5, 0.0}, 0.0, 0),
                    klg::strip_mismatch_error);
    CHECK_THROWS_AS(klg::kl_extended({0.3, 0.0}, 0.0, 0),
                    klg::strip_mismatch_error);
    CHECK_THROWS_AS(klg::kl_extended({-0.5, 0.0}, 0.0, 9), klg::range_error);
    CHECK_THROWS_WITH(
        klg::kl_extended({-1.7, 0.0}, 0.0, 0),
        Catch::Matchers::ContainsSubstring("needs n = 1"));

    CHECK_THROWS_AS(klg::kl_mixed({-1.0, 0.0}, 0.5, 1), klg::pole_error);
    CHECK_THROWS_AS(klg::kl_mixed({0.0, 0.0}, 0.5, 0), klg::pole_error);
    CHECK_THROWS_AS(klg::kl_mixed({-0.5, 0.0}, 1.0, 0),
                    klg::degenerate_sine_error);
    CHECK_THROWS_AS(klg::kl_mixed({-2.3, 0.0}, 1.0, 0),
                    klg::strip_mismatch_error);
    CHECK_THROWS_AS(klg::kl_mixed({-0.25, 0.0}, 1.0, -1), klg::range_error);

    CHECK_THROWS_AS(klg::mellin_ki({-1.0, 0.0}, 1, 0.0), klg::domain_error);
    CHECK_THROWS_AS(klg::mellin_ki({1.0, 0.0}, -1, 0.0), klg::domain_error);

    CHECK_THROWS_AS(klg::fourier_gamma_direct(0.0, 1.0), klg::pole_error);
    CHECK_THROWS_AS(klg::fourier_gamma_direct(-2.0, 1.0), klg::pole_error);
    CHECK_THROWS_AS(klg::fourier_gamma_repr(-0.25, 1.0, 1),
                    klg::strip_mismatch_error);
    CHECK_THROWS_AS(klg::fourier_gamma_repr(-0.25, 1.0, 9), klg::range_error);
    CHECK_THROWS_AS(klg::ramanujan_closed(-0.5, 0.0), klg::domain_error);
}

// ---------------------------------------------------------------------------
// Grid runner
// ---------------------------------------------------------------------------

TEST_CASE("builtin grids have the advertised shape", "[identities][grid]") {
    auto kl = klg::VerifyGrid::builtin("kl");
    CHECK(kl.classic.empty());
    CHECK(kl.extended.size() == 25);
    CHECK(kl.mixed.empty());
    CHECK(kl.mellin.empty());
    CHECK(kl.ramanujan.empty());
    CHECK(kl.fourier.empty());

    auto all = klg::VerifyGrid::builtin("all");
    CHECK(all.classic.size() == 16);
    CHECK(all.extended.size() == 27);
    CHECK(all.mixed.size() == 16);
    CHECK(all.mellin.size() == 9);
    CHECK(all.ramanujan.size() == 9);
    CHECK(all.fourier.size() == 16);

    CHECK_THROWS_AS(klg::VerifyGrid::builtin("bogus"), klg::domain_error);
}

TEST_CASE("verify_all reports deterministically and never throws",
          "[identities][grid]") {
    // empty grid -> empty report list
    CHECK(klg::verify_all(klg::VerifyGrid{}).empty());

    // mellin suite: 9 reports in grid order, all converged
    auto reports = klg::verify_all(klg::VerifyGrid::builtin("mellin"));
    REQUIRE(reports.size() == 9);
    for (const auto& r : reports) {
        CAPTURE(r.params);
        CHECK(r.name == "mellin_pair");
        CHECK(r.converged);
        CHECK(r.error.empty());
        CHECK(r.evaluations > 0);
        CHECK(r.rel_residual < 1e-9);
        CHECK(r.params.size() == 4);
    }

    // an invalid point is reported, not thrown
    klg::VerifyGrid bad;
    bad.classic.push_back({cplx(-1.0, 0.0), 0.5, 0});
    auto rep = klg::verify_all(bad);
    REQUIRE(rep.size() == 1);
    CHECK_FALSE(rep[0].converged);
    CHECK_FALSE(rep[0].error.empty());
    CHECK(std::isnan(rep[0].rel_residual));
}

TEST_CASE("fourier suite interleaves the closed-form checks",
          "[identities][grid]") {
    auto reports = klg::verify_all(klg::VerifyGrid::builtin("fourier"));
    // 9 ramanujan + 16 pairs + 2 closed-form checks after each a = -1/2 pair
    REQUIRE(reports.size() == 33);
    for (int i = 0; i < 9; ++i) CHECK(reports[i].name == "ramanujan");
    CHECK(reports[9].name == "fourier_pair");
    CHECK(reports[13].name == "fourier_pair");
    CHECK(reports[14].name == "fourier_closed_direct");
    CHECK(reports[15].name == "fourier_closed_repr");
    CHECK(reports[32].name == "fourier_pair");
    for (const auto& r : reports) {
        CAPTURE(r.name, r.params);
        CHECK(r.converged);
        CHECK(r.rel_residual < 1e-6);
    }
}
