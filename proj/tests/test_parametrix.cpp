#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "fraclab/parametrix.hpp"

using namespace fraclab;

TEST_CASE("principal square root of -z") {
    CHECK(sqrt_minus_z(Complex(-4.0, 0.0)) == Complex(2.0, 0.0));
    Complex m = sqrt_minus_z(Complex(0.0, 1.0));
    CHECK(m.real() > 0.0);
    CHECK(std::abs(m * m + Complex(0.0, 1.0)) < 1e-14);
    CHECK_THROWS_AS(sqrt_minus_z(Complex(1.0, 0.0)), std::domain_error);
    CHECK_THROWS_AS(sqrt_minus_z(Complex(0.0, 0.0)), std::domain_error);
}

TEST_CASE("order-zero potential matches flat fundamental solutions") {
    // n = 1: F_0(r) = e^{-m r} / (2 m) at z = -m^2
    for (double r : {0.2, 1.0, 3.0}) {
        Complex v1 = f_nu_eval(BesselPotential{0, Complex(-1.0, 0.0), 1}, r);
        CHECK(std::abs(v1 - 0.5 * std::exp(-r)) < 1e-9);
        // n = 3: F_0(r) = e^{-r} / (4 pi r)
        Complex v3 = f_nu_eval(BesselPotential{0, Complex(-1.0, 0.0), 3}, r);
        CHECK(std::abs(v3 - std::exp(-r) / (4.0 * kPi * r)) < 1e-9);
        // n = 2: F_0(r) = K_0(r) / (2 pi)
        Complex v2 = f_nu_eval(BesselPotential{0, Complex(-1.0, 0.0), 2}, r);
        CHECK(std::abs(v2 - bessel_k(0.0, r) / kTwoPi) < 1e-9);
    }
}

TEST_CASE("radial recursion -2 F_nu'/r = F_{nu-1}") {
    std::vector<double> rs{0.1, 0.5, 1.0, 2.0};
    for (int n : {1, 2, 3}) {
        CHECK(f_nu_recursion_check(BesselPotential{1, Complex(-1.0, 0.0), n}, rs) < 1e-4);
        CHECK(f_nu_recursion_check(BesselPotential{2, Complex(-0.5, 0.8), n}, rs) < 1e-4);
    }
    CHECK_THROWS_AS(f_nu_recursion_check(BesselPotential{0, Complex(-1.0, 0.0), 2}, rs),
                    std::invalid_argument);
}

TEST_CASE("transport equation: flat and spherical amplitudes") {
    auto flat = solve_transport_u0(make_parametrix_geometry(Manifold::torus(2)), 2.0, 32);
    for (double u : flat.u0) CHECK(u == Catch::Approx(1.0).epsilon(1e-12));

    auto sph = solve_transport_u0(make_parametrix_geometry(Manifold::sphere()), 0.9 * kPi, 64);
    for (std::size_t i = 1; i < sph.r.size(); ++i) {
        double want = std::sqrt(sph.r[i] / std::sin(sph.r[i]));
        CHECK(sph.u0[i] == Catch::Approx(want).epsilon(1e-7));
    }
    // small-r series u0 = 1 + r^2/12 + O(r^4)
    auto small = solve_transport_u0(make_parametrix_geometry(Manifold::sphere()), 0.1, 10);
    for (std::size_t i = 1; i < small.r.size(); ++i) {
        double r = small.r[i];
        CHECK(std::abs(small.u0[i] - (1.0 + r * r / 12.0)) < 1e-5);
    }

    CHECK_THROWS_AS(solve_transport_u0(make_parametrix_geometry(Manifold::sphere()), kPi),
                    std::invalid_argument);
    ParametrixGeometry bad;
    bad.manifold = Manifold::sphere();
    bad.h = [](double r) { return r; };  // not O(r^2) at the center
    CHECK_THROWS_AS(solve_transport_u0(bad, 1.0), std::invalid_argument);
}

TEST_CASE("parametrix application is linear") {
    Manifold m = Manifold::torus(1);
    GridPtr g = build_grid(m, 64);
    auto pr = ResolventParametrix::make(m, 0);
    Complex z(-1.0, 0.0);
    Field zero(g);
    CHECK(l2_norm(apply_parametrix(zero, pr, z, g)) == 0.0);
    Field f(g);
    for (std::size_t i = 0; i < g->size(); ++i)
        f.values[i] = std::sin(5.0 * g->points[i].c[0]);
    Field pf = apply_parametrix(f, pr, z, g);
    Field p2f = apply_parametrix(2.0 * f, pr, z, g);
    CHECK(l2_norm(p2f - (2.0 * pf)) < 1e-12 * l2_norm(pf));
    CHECK_THROWS_AS(ResolventParametrix::make(m, 3), std::invalid_argument);
}

TEST_CASE("remainder probe: parametrix approximately inverts (-Laplace - z)") {
    Manifold m = Manifold::torus(1);
    GridPtr g = build_grid(m, 128);
    Basis b = eigenbasis(g, 20);
    Field f(g);
    for (std::size_t i = 0; i < g->size(); ++i)
        f.values[i] = std::sin(16.0 * g->points[i].c[0]);
    auto pr = ResolventParametrix::make(m, 0);
    auto probe = remainder_probe(pr, Complex(-1.0, 0.0), f, b);
    CHECK(probe.residual_l2 < 0.05 * l2_norm(f));
    // the residual field matches its reported norm
    CHECK(l2_norm(probe.residual) == Catch::Approx(probe.residual_l2));
}
