#pragma once

// Hadamard parametrix machinery: Bessel potentials F_nu^z, their recursion,
// the radial transport equation for the leading amplitude u_0, and assembly
// of the right parametrix P_N^z with its remainder probe.
//
// Convention: for z off the nonnegative reals we write m = sqrt(-z) with
// Re(m) > 0 and
//     F_nu^z(r) = c_nu r^{nu+1-n/2} m^{n/2-nu-1} K_{n/2-nu-1}(m r),
// which matches the Fourier normalization of the order-zero potential
// (F_0 is the fundamental solution of (-Laplace - z) in flat R^n). The
// recursion -2 F_nu'(r)/r = F_{nu-1}(r) then fixes c_nu = c_0 / 2^nu with
// c_0 = (2 pi)^{-n/2}.

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "fraclab/geometry.hpp"
#include "fraclab/heat.hpp"
#include "fraclab/pvkernel.hpp"
#include "fraclab/specfun.hpp"
#include "fraclab/spectral.hpp"

namespace fraclab {

inline Complex sqrt_minus_z(Complex z) {
    if (z.imag() == 0.0 && z.real() >= 0.0)
        throw std::domain_error("sqrt_minus_z: z on the nonnegative reals");
    Complex m = std::sqrt(-z);
    if (m.real() < 0.0) m = -m;
    return m;
}

struct BesselPotential {
    int nu = 0;
    Complex z{-1.0, 0.0};
    int n = 2;

    double c_nu() const { return std::pow(kTwoPi, -0.5 * n) / std::pow(2.0, nu); }
    double k_order() const { return 0.5 * n - nu - 1.0; }
};

inline Complex f_nu_eval(const BesselPotential& p, double r) {
    if (!(r > 0.0)) throw std::domain_error("f_nu_eval: r <= 0");
    Complex m = sqrt_minus_z(p.z);
    double ell = p.k_order();
    return p.c_nu() * std::pow(r, double(p.nu) + 1.0 - 0.5 * p.n) *
           std::pow(m, 0.5 * p.n - p.nu - 1.0) * bessel_k(BesselOrder{ell}, m * r);
}

// Max relative residual of the radial recursion -2 F_nu'(r)/r = F_{nu-1}(r)
// over the samples, with central finite differences.
inline double f_nu_recursion_check(const BesselPotential& p, const std::vector<double>& r_samples) {
    if (p.nu < 1) throw std::invalid_argument("f_nu_recursion_check: nu >= 1 required");
    BesselPotential prev = p;
    prev.nu = p.nu - 1;
    double worst = 0.0;
    for (double r : r_samples) {
        double h = 1e-6 * r;
        Complex d = (f_nu_eval(p, r + h) - f_nu_eval(p, r - h)) / (2.0 * h);
        Complex lhs = -2.0 * d / r;
        Complex rhs = f_nu_eval(prev, r);
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Transport equation 2 r u0'(r) = h(r) u0(r), u0(0) = 1, along a geodesic ray.

struct ParametrixGeometry {
    Manifold manifold;
    std::function<double(double)> h;  // contraction sum g_jk b^j x_k along the ray
};

inline ParametrixGeometry make_parametrix_geometry(const Manifold& m) {
    ParametrixGeometry g;
    g.manifold = m;
    if (m.kind == ManifoldKind::Torus) {
        g.h = [](double) { return 0.0; };
    } else {
        // h(r) = -r Theta'(r)/Theta(r) = 1 - r cot(r) on the unit sphere
        g.h = [](double r) {
            if (r < 1e-4) return r * r / 3.0 + r * r * r * r / 45.0;
            return 1.0 - r * std::cos(r) / std::sin(r);
        };
    }
    return g;
}

struct TransportSolution {
    std::vector<double> r;
    std::vector<double> u0;
};

// Adaptive RK4 (step doubling, local error 1e-10) for the radial transport
// ODE; output on a uniform grid of n_out+1 points including both endpoints.
inline TransportSolution solve_transport_u0(const ParametrixGeometry& geom, double r_max,
                                            int n_out = 64) {
    if (!(r_max > 0.0) || r_max >= geom.manifold.injectivity_radius)
        throw std::invalid_argument("solve_transport_u0: r_max outside (0, inj radius)");
    // reject geometries whose h is not O(r^2) at the center
    {
        double ha = geom.h(1e-3) / 1e-6, hb = geom.h(1e-4) / 1e-8;
        if (std::abs(hb) > 2.0 * std::abs(ha) + 1.0)
            throw std::invalid_argument("solve_transport_u0: h is not O(r^2) at 0");
    }
    auto rhs = [&](double r, double u) { return 0.5 * geom.h(r) * u / r; };
    auto rk4 = [&](double r, double u, double h) {
        double k1 = rhs(r, u);
        double k2 = rhs(r + 0.5 * h, u + 0.5 * h * k1);
        double k3 = rhs(r + 0.5 * h, u + 0.5 * h * k2);
        double k4 = rhs(r + h, u + h * k3);
        return u + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };

    TransportSolution sol;
    sol.r.resize(n_out + 1);
    sol.u0.resize(n_out + 1);
    for (int i = 0; i <= n_out; ++i) sol.r[i] = r_max * i / n_out;
    sol.u0[0] = 1.0;

    // series start just off the center: u0 = 1 + (h2/4) r^2
    double r = 1e-6;
    double h2 = geom.h(1e-4) / 1e-8;
    double u = 1.0 + 0.25 * h2 * r * r;
    double step = 1e-4;
    const double tol = 1e-10;
    int out = 1;
    while (out <= n_out) {
        double target = sol.r[out];
        if (r >= target - 1e-15) {
            sol.u0[out++] = u;
            continue;
        }
        double h = std::min(step, target - r);
        double u_full = rk4(r, u, h);
        double u_half = rk4(r + 0.5 * h, rk4(r, u, 0.5 * h), 0.5 * h);
        double err = std::abs(u_full - u_half);
        if (err > tol && h > 1e-12) {
            step = std::max(0.5 * h, 1e-12);
            continue;
        }
        if (h <= 1e-12 && err > tol)
            throw std::runtime_error("solve_transport_u0: step-size underflow");
        u = u_half + (u_half - u_full) / 15.0;
        r += h;
        if (err < 0.1 * tol) step = std::min(2.0 * h, 0.05);
    }
    return sol;
}

// ---------------------------------------------------------------------------
// Right parametrix P_N^z and remainder probe.

struct ResolventParametrix {
    Manifold manifold;
    int depth = 0;  // N <= 2; amplitudes beyond u_1 have no closed form here
    double cutoff_radius = 0.0;
    bool calibrated_u1 = true;  // sphere only; the torus u_1 vanishes

    static ResolventParametrix make(const Manifold& m, int depth) {
        if (depth < 0 || depth > 2)
            throw std::invalid_argument("ResolventParametrix: depth must be 0..2");
        return ResolventParametrix{m, depth, default_cutoff_radius(m), true};
    }
};

// P_N^z f(x) = int chi(x,y) sum_nu u_nu(x,y) F_nu^z(d(x,y)) f(y) dvol(y).
// The integrable singularity of F_0 at y = x is handled by the closed-form
// polar integral over the equal-measure cell around x.
inline Field apply_parametrix(const Field& f, const ResolventParametrix& pr, Complex z,
                              const GridPtr& grid) {
    if (f.grid != grid) throw std::invalid_argument("apply_parametrix: grid mismatch");
    const Manifold& m = pr.manifold;
    const int n = m.dim;
    Complex mm = sqrt_minus_z(z);

    // radial profile of u_1 (zero on tori; calibrated from the heat residual on S^2)
    auto u1_of = [&](double d) -> double {
        if (pr.depth < 1 || m.kind == ManifoldKind::Torus || !pr.calibrated_u1) return 0.0;
        return sphere_u1_calibrated(d).u1;
    };

    // cache the u1 profile on a radial table to keep the pair loop cheap
    std::vector<double> u1_table;
    double u1_step = 0.0;
    if (pr.depth >= 1 && m.kind == ManifoldKind::Sphere && pr.calibrated_u1) {
        const int nt = 96;
        u1_step = pr.cutoff_radius / nt;
        u1_table.resize(nt + 1);
        for (int i = 0; i <= nt; ++i) u1_table[i] = u1_of(std::max(1e-4, i * u1_step));
    }
    auto u1_interp = [&](double d) -> double {
        if (u1_table.empty()) return 0.0;
        double u = d / u1_step;
        int i = std::min(int(u), int(u1_table.size()) - 2);
        double frac = u - i;
        return u1_table[i] * (1.0 - frac) + u1_table[i + 1] * frac;
    };

    BesselPotential p0{0, z, n};
    BesselPotential p1{1, z, n};

    const Grid& g = *grid;

    // The kernel is radial and structured grids repeat distances heavily, so
    // the (adaptive-quadrature) Bessel evaluations are memoized per distance.
    auto dist_key = [](double d) { return (long long)std::llround(d * 4.0e12); };
    std::unordered_map<long long, Complex> kernel_by_d;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j) {
            double d = geodesic_distance(m, g.points[i], g.points[j]);
            if (d < pr.cutoff_radius) kernel_by_d.emplace(dist_key(d), Complex(0.0));
        }
    std::vector<long long> keys;
    keys.reserve(kernel_by_d.size());
    for (const auto& kv : kernel_by_d) keys.push_back(kv.first);
    parallel_for(keys.size(), [&](std::size_t k) {
        double d = double(keys[k]) / 4.0e12;
        double chi = cutoff_chi(d, pr.cutoff_radius);
        Complex ker = (1.0 / std::sqrt(theta_radial(m, d))) * f_nu_eval(p0, d);
        if (pr.depth >= 1) ker += u1_interp(d) * f_nu_eval(p1, d);
        kernel_by_d[keys[k]] = chi * ker;
    });

    Field out(f.grid);
    parallel_for(g.size(), [&](std::size_t i) {
        const Point& x = g.points[i];
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (j == i) continue;
            double d = geodesic_distance(m, x, g.points[j]);
            if (d >= pr.cutoff_radius) continue;
            acc += kernel_by_d.find(dist_key(d))->second * f.values[j] * g.weights[j];
        }
        // self cell: closed-form polar integral of F_0 over the equal-measure cell
        double w = g.weights[i];
        if (n == 1) {
            double rho = 0.5 * w;
            acc += f.values[i] * (1.0 - std::exp(-mm * rho)) / (mm * mm);
        } else {
            double rho = std::sqrt(w / kPi);
            Complex arg = mm * rho;
            acc += f.values[i] * (1.0 - arg * bessel_k(BesselOrder{1.0}, arg)) / (mm * mm);
        }
        out.values[i] = acc;
    });
    return out;
}

struct RemainderProbe {
    Field residual;
    double residual_l2 = 0.0;
};

// (-Laplace_g - z) P_N^z f - f, with -Laplace_g applied spectrally to the
// band-limited projection of the parametrix output.
inline RemainderProbe remainder_probe(const ResolventParametrix& pr, Complex z,
                                      const Field& f, const Basis& basis) {
    Field pf = apply_parametrix(f, pr, z, f.grid);
    SpectralCoeffs sc = analyze(pf, basis);
    for (std::size_t k = 0; k < basis.pairs.size(); ++k)
        sc.coeffs[k] *= (basis.pairs[k].lambda - z);
    Field lpf = synthesize(sc, basis);
    RemainderProbe out{lpf - f, 0.0};
    out.residual_l2 = l2_norm(out.residual);
    return out;
}

}  // namespace fraclab
