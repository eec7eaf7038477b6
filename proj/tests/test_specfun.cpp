#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "fraclab/specfun.hpp"

using namespace fraclab;

namespace {
constexpr double pi = 3.14159265358979323846;
}

TEST_CASE("gamma helpers") {
    CHECK(gamma_fn(0.5) == Catch::Approx(std::sqrt(pi)).epsilon(1e-14));
    CHECK(gamma_fn(5.0) == Catch::Approx(24.0).epsilon(1e-14));
    CHECK(abs_gamma_neg(0.5) == Catch::Approx(2.0 * std::sqrt(pi)).epsilon(1e-13));
    CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_fn(-2.0), std::domain_error);
}

TEST_CASE("bessel_k real-argument reference values") {
    // Abramowitz & Stegun / DLMF reference values
    CHECK(bessel_k(0.0, 1.0) == Catch::Approx(0.42102443824070834).epsilon(1e-9));
    CHECK(bessel_k(1.0, 1.0) == Catch::Approx(0.60190723019723458).epsilon(1e-9));
    CHECK(bessel_k(0.0, 5.0) == Catch::Approx(3.6910983340425943e-3).epsilon(1e-9));
    // half-integer closed form K_{1/2}(w) = sqrt(pi/(2w)) e^{-w}
    for (double w : {0.3, 1.0, 4.0})
        CHECK(bessel_k(0.5, w) ==
              Catch::Approx(std::sqrt(0.5 * pi / w) * std::exp(-w)).epsilon(1e-9));
    // symmetry in the order
    CHECK(bessel_k(-1.5, 2.0) == Catch::Approx(bessel_k(1.5, 2.0)).epsilon(1e-12));
}

TEST_CASE("bessel_k complex argument") {
    // K_{1/2} closed form extends to Re(w) > 0
    Complex w(0.8, 1.3);
    Complex want = std::sqrt(0.5 * pi / w) * std::exp(-w);
    Complex got = bessel_k(BesselOrder{0.5}, w);
    CHECK(std::abs(got - want) < 1e-8 * std::abs(want));
    // conjugation symmetry for real order
    Complex gc = bessel_k(BesselOrder{2.0}, std::conj(w));
    Complex g = bessel_k(BesselOrder{2.0}, w);
    CHECK(std::abs(gc - std::conj(g)) < 1e-9 * std::abs(g));
    CHECK_THROWS_AS(bessel_k(BesselOrder{0.0}, Complex(-1.0, 0.5)), std::domain_error);
}

TEST_CASE("two-branch bound suprema stay finite") {
    std::vector<double> samples;
    for (int i = 0; i <= 40; ++i)
        samples.push_back(0.01 * std::pow(2000.0, i / 40.0));  // 0.01 .. 20
    auto r1 = bessel_k_bound_check(1.0, samples);
    CHECK(r1.holds);
    CHECK(r1.small_branch_checked);
    CHECK(r1.c_small > 0.0);
    CHECK(r1.c_large > 0.0);
    // l = 0 has a log singularity at 0; the small branch must be skipped
    auto r0 = bessel_k_bound_check(0.0, samples);
    CHECK_FALSE(r0.small_branch_checked);
    CHECK(r0.c_small == 0.0);
    CHECK_THROWS_AS(bessel_k_bound_check(-1.0, samples), std::invalid_argument);
}
