#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fraclab/pvkernel.hpp"

using namespace fraclab;

TEST_CASE("kernel constant: closed forms and the logarithmic exclusion") {
    CHECK(c_ns_constant(1, 0.5) == Catch::Approx(1.0 / kPi).epsilon(1e-13));
    // c_{2,1/2} = 4^{1/2} Gamma(3/2) / (pi |Gamma(-1/2)|) = 1/(2 pi)
    CHECK(c_ns_constant(2, 0.5) == Catch::Approx(1.0 / kTwoPi).epsilon(1e-13));
    CHECK(c_ns_constant(1, 0.25) > 0.0);
    CHECK_THROWS_AS(c_ns_constant(1, -0.5), std::invalid_argument);  // n/2 + s = 0
    CHECK_THROWS_AS(c_ns_constant(1, -0.6), std::invalid_argument);
    CHECK_THROWS_AS(c_ns_constant(2, 0.0), std::invalid_argument);
}

TEST_CASE("cutoff is a partition between plateau and tail") {
    CHECK(cutoff_chi(0.2, 1.0) == 1.0);
    CHECK(cutoff_chi(0.5, 1.0) == 1.0);
    CHECK(cutoff_chi(1.0, 1.0) == 0.0);
    CHECK(cutoff_chi(1.5, 1.0) == 0.0);
    double prev = 1.0;
    for (double d = 0.5; d <= 1.0; d += 0.01) {
        double v = cutoff_chi(d, 1.0);
        CHECK(v <= prev + 1e-15);
        prev = v;
    }
}

TEST_CASE("lattice closed form agrees with the heat-route kernel on T^1") {
    Manifold m = Manifold::torus(1);
    Point x0 = make_point(m, 0.0);
    for (double s : {0.25, 0.75}) {
        double c = c_ns_constant(1, s);
        for (double d : {0.05, 0.5, 1.5}) {
            Point y = make_point(m, d);
            double lattice = detail::torus_lattice_kernel(m, x0, y, s, c);
            double heat = exact_offdiagonal_kernel(m, x0, y, s);
            CHECK(lattice == Catch::Approx(heat).epsilon(5e-4));
        }
    }
}

TEST_CASE("exact kernel: symmetry, positivity, and the diagonal power law") {
    Manifold s2 = Manifold::sphere();
    ExactKernel K(s2, 0.5, 400);
    Point a = make_point(s2, 0.7, 0.3), b = make_point(s2, 1.9, 2.0);
    CHECK(K(a, b) == Catch::Approx(K(b, a)).epsilon(1e-12));
    CHECK(K(a, b) > 0.0);
    // near the diagonal, d^{n+2s} K(d) tends to c_ns
    double c = c_ns_constant(2, 0.5);
    double m_small = std::pow(0.01, 3.0) * K.radial(0.01);
    CHECK(m_small == Catch::Approx(c).epsilon(2e-2));
    CHECK(K.singular_exponent() == Catch::Approx(3.0));
}

TEST_CASE("PV application: symbol accuracy, constants, and guards") {
    Manifold m = Manifold::torus(1);
    GridPtr g = build_grid(m, 128);
    Basis basis = eigenbasis(g, 8);
    KernelSpec spec = make_kernel_spec(m, 0.5);
    PVScheme scheme;
    scheme.grid = g;
    scheme.epsilon = 4.0 * g->spacing();

    // constants are annihilated
    Field one(g);
    for (auto& v : one.values) v = 1.0;
    Field z = pv_apply(one, spec, scheme, basis);
    CHECK(linf_norm(z) < 1e-10);

    // single modes: multiplier close to k^{2s} = k; the residual scales with
    // the neglected fourth Taylor order of the epsilon-ball, ~ (k eps)^{4-2s}
    for (int k : {2, 5}) {
        Field f(g);
        for (std::size_t i = 0; i < g->size(); ++i)
            f.values[i] = std::sin(k * g->points[i].c[0]);
        Field got = pv_apply(f, spec, scheme, basis);
        Field want = fractional_apply_spectral(f, 0.5, basis);
        CHECK(l2_norm(got - want) < 2e-2 * l2_norm(want));
    }
    // refining the grid (epsilon = 4h shrinking with it) reduces the error
    {
        GridPtr g2 = build_grid(m, 256);
        Basis basis2 = eigenbasis(g2, 8);
        PVScheme fine;
        fine.grid = g2;
        fine.epsilon = 4.0 * g2->spacing();
        Field f(g), f2(g2);
        for (std::size_t i = 0; i < g->size(); ++i)
            f.values[i] = std::sin(5.0 * g->points[i].c[0]);
        for (std::size_t i = 0; i < g2->size(); ++i)
            f2.values[i] = std::sin(5.0 * g2->points[i].c[0]);
        double coarse_err = l2_norm(pv_apply(f, spec, scheme, basis) -
                                    fractional_apply_spectral(f, 0.5, basis));
        double fine_err = l2_norm(pv_apply(f2, spec, fine, basis2) -
                                  fractional_apply_spectral(f2, 0.5, basis2));
        CHECK(fine_err < 0.5 * coarse_err);
    }

    // guards
    PVScheme tight = scheme;
    tight.epsilon = 1.5 * g->spacing();
    Field f(g);
    CHECK_THROWS_AS(pv_apply(f, spec, tight, basis), std::invalid_argument);
    PVScheme asym = scheme;
    asym.symmetrized = false;
    CHECK_THROWS_AS(pv_apply(f, spec, asym, basis), std::invalid_argument);
    KernelSpec bad = spec;
    bad.s = -0.5;
    CHECK_THROWS_AS(pv_apply(f, bad, scheme, basis), std::invalid_argument);
}

TEST_CASE("Riesz route inverts the positive power on mean-zero fields") {
    Manifold m = Manifold::torus(1);
    GridPtr g = build_grid(m, 128);
    Basis basis = eigenbasis(g, 6);
    Field f(g);
    for (std::size_t i = 0; i < g->size(); ++i) {
        double x = g->points[i].c[0];
        f.values[i] = std::sin(x) + 0.3 * std::cos(4.0 * x);
    }
    Field half = fractional_apply_spectral(f, 0.25, basis);
    PVScheme scheme;
    scheme.grid = g;
    scheme.epsilon = 4.0 * g->spacing();
    Field back = riesz_apply(half, make_kernel_spec(m, -0.25), scheme);
    CHECK(l2_norm(back - f) < 2e-2 * l2_norm(f));

    // guards: mean-zero requirement, T^2 exclusion, logarithmic case
    Field one(g);
    for (auto& v : one.values) v = 1.0;
    CHECK_THROWS_AS(riesz_apply(one, make_kernel_spec(m, -0.25), scheme),
                    std::invalid_argument);
    CHECK_THROWS_AS(ExactKernel(Manifold::torus(2), -0.25), std::invalid_argument);
    CHECK_THROWS_AS(make_kernel_spec(m, -0.5), std::invalid_argument);
}

TEST_CASE("diagonal asymptotics recover the kernel constant") {
    Manifold m = Manifold::torus(1);
    std::vector<double> d_seq;
    for (int i = 0; i < 10; ++i) d_seq.push_back(0.02 * std::pow(10.0, i / 9.0));
    auto diag = diagonal_asymptotics_check(0.5, m, d_seq);
    CHECK(diag.limit == Catch::Approx(c_ns_constant(1, 0.5)).epsilon(2e-2));
    CHECK(diag.slope > 0.8);  // residual vanishes at least linearly
    CHECK_THROWS_AS(diagonal_asymptotics_check(0.5, m, {}), std::invalid_argument);
    CHECK_THROWS_AS(diagonal_asymptotics_check(0.5, m, {4.0}), std::invalid_argument);
}
