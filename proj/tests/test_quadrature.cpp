#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "fraclab/quadrature.hpp"

using namespace fraclab;

TEST_CASE("gauss_legendre reproduces the classical 4-point rule") {
    auto q = gauss_legendre(4);
    REQUIRE(q.nodes.size() == 4);
    CHECK(q.nodes[0] == Catch::Approx(-0.8611363115940526).epsilon(1e-14));
    CHECK(q.nodes[1] == Catch::Approx(-0.3399810435848563).epsilon(1e-14));
    CHECK(q.weights[0] == Catch::Approx(0.3478548451374538).epsilon(1e-13));
    CHECK(q.weights[1] == Catch::Approx(0.6521451548625461).epsilon(1e-13));
    double wsum = 0.0;
    for (double w : q.weights) wsum += w;
    CHECK(wsum == Catch::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("gl_integrate is exact for polynomials up to degree 2n-1") {
    auto q = gauss_legendre(3);
    auto p5 = [](double x) { return x * x * x * x * x; };  // degree 5 = 2*3 - 1
    CHECK(gl_integrate(p5, 0.0, 2.0, q) == Catch::Approx(64.0 / 6.0).epsilon(1e-14));
    auto p6 = [](double x) { return x * x * x * x * x * x; };
    CHECK(gl_integrate(p6, 0.0, 2.0, q) != Catch::Approx(128.0 / 7.0).epsilon(1e-10));
}

TEST_CASE("adaptive_integrate hits smooth oracles") {
    CHECK(adaptive_integrate([](double x) { return std::sin(x); }, 0.0,
                             3.14159265358979323846, 1e-12) ==
          Catch::Approx(2.0).epsilon(1e-10));
    // complex-valued integrand
    auto f = [](double x) { return std::complex<double>(std::cos(x), std::sin(x)); };
    auto v = adaptive_integrate(f, 0.0, 1.0, 1e-12);
    CHECK(v.real() == Catch::Approx(std::sin(1.0)).epsilon(1e-10));
    CHECK(v.imag() == Catch::Approx(1.0 - std::cos(1.0)).epsilon(1e-10));
    // empty interval
    CHECK(adaptive_integrate([](double) { return 1.0; }, 1.0, 1.0, 1e-12) == 0.0);
}

TEST_CASE("geometric_panels covers the range with bounded ratios") {
    auto e = geometric_panels(1e-6, 10.0, 1.3);
    REQUIRE(e.size() >= 2);
    CHECK(e.front() == 1e-6);
    CHECK(e.back() == 10.0);
    for (std::size_t k = 0; k + 1 < e.size(); ++k) {
        CHECK(e[k + 1] > e[k]);
        CHECK(e[k + 1] / e[k] <= 1.3 + 1e-12);
    }
    CHECK_THROWS_AS(geometric_panels(0.0, 1.0, 1.3), std::invalid_argument);
    CHECK_THROWS_AS(geometric_panels(1.0, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("panel_integrate handles an integrable power singularity") {
    auto q = gauss_legendre(8);
    double got = panel_integrate([](double t) { return std::pow(t, -0.5); }, 1e-8, 10.0,
                                 1.2, q);
    double want = 2.0 * (std::sqrt(10.0) - 1e-4);
    CHECK(got == Catch::Approx(want).epsilon(1e-10));
}
