#pragma once

// Ground-truth fractional calculus on band-limited fields: forward/backward
// transforms, spectral powers of -Laplace_g, the resolvent, the scalar
// contour-integral power, and the L^infty Sobolev embedding probe.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "fraclab/geometry.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {

struct SpectralCoeffs {
    std::vector<std::complex<double>> coeffs;  // one per basis eigenpair
    int band_limit = 0;
};

inline SpectralCoeffs analyze(const Field& f, const Basis& basis) {
    if (f.grid != basis.grid) throw std::invalid_argument("analyze: grid mismatch");
    SpectralCoeffs sc;
    sc.band_limit = basis.band_limit;
    sc.coeffs.resize(basis.pairs.size());
    const auto& w = f.grid->weights;
    for (std::size_t k = 0; k < basis.pairs.size(); ++k) {
        std::complex<double> a = 0.0;
        const auto& y = basis.pairs[k].values;
        for (std::size_t i = 0; i < y.size(); ++i) a += w[i] * y[i] * f.values[i];
        sc.coeffs[k] = a;
    }
    return sc;
}

inline Field synthesize(const SpectralCoeffs& sc, const Basis& basis) {
    if (sc.coeffs.size() != basis.pairs.size())
        throw std::invalid_argument("synthesize: coefficient count mismatch");
    Field f(basis.grid);
    for (std::size_t k = 0; k < basis.pairs.size(); ++k) {
        const auto& y = basis.pairs[k].values;
        const auto a = sc.coeffs[k];
        if (a == std::complex<double>(0.0)) continue;
        for (std::size_t i = 0; i < y.size(); ++i) f.values[i] += a * y[i];
    }
    return f;
}

inline bool is_mean_zero(const Field& f) {
    double scale = linf_norm(f);
    if (scale == 0.0) return true;
    return std::abs(weighted_mean(f)) * f.grid->manifold.volume() < 1e-8 * scale;
}

// Spectral multiplier application: g = sum m(lambda_k) a_k Y_k.
template <class M>
Field apply_multiplier(const Field& f, const Basis& basis, M&& mult) {
    SpectralCoeffs sc = analyze(f, basis);
    for (std::size_t k = 0; k < basis.pairs.size(); ++k)
        sc.coeffs[k] *= mult(basis.pairs[k].lambda);
    return synthesize(sc, basis);
}

// (-Laplace_g)^s on band-limited fields; for s < 0 the input must be
// orthogonal to constants (the lambda = 0 mode is excluded).
inline Field fractional_apply_spectral(const Field& f, double s, const Basis& basis) {
    if (!(s > -1.0 && s < 1.0) || s == 0.0)
        throw std::invalid_argument("fractional_apply_spectral: s outside (-1,1)\\{0}");
    if (s < 0.0 && !is_mean_zero(f))
        throw std::invalid_argument("fractional_apply_spectral: s < 0 requires mean-zero input");
    return apply_multiplier(f, basis, [s](double lam) {
        return lam == 0.0 ? 0.0 : std::pow(lam, s);
    });
}

inline Field resolvent_apply(const Field& f, std::complex<double> z, const Basis& basis) {
    for (const auto& ep : basis.pairs)
        if (std::abs(std::complex<double>(ep.lambda) - z) < 1e-12)
            throw std::invalid_argument("resolvent_apply: z on the spectrum");
    SpectralCoeffs sc = analyze(f, basis);
    for (std::size_t k = 0; k < basis.pairs.size(); ++k)
        sc.coeffs[k] /= (basis.pairs[k].lambda - z);
    return synthesize(sc, basis);
}

struct ContourSpec {
    double axis_extent = 0.0;  // integrate z = it, t in [-R, R]
    int node_count = 0;        // even; nodes on the log-radial variable
};

// Scalar model of (1/2 pi i) PV int_gamma z^s (lambda - z)^{-1} dz with gamma
// the imaginary axis traversed upward and z^s on the principal branch.
// Folding t and -t gives the real integral
//   lambda^s = (1/pi) int_0^inf t^s (lambda cos a - t sin a) / (lambda^2+t^2) dt,
// a = pi s / 2, evaluated by trapezoid in x = log(t/lambda) on [-L, log(R/lambda)]
// plus the analytic tail beyond R expanded in (lambda/R)^2.
inline std::complex<double> contour_power_scalar(double lambda, double s,
                                                 const ContourSpec& contour) {
    if (!(lambda > 0.0)) throw std::invalid_argument("contour_power_scalar: lambda <= 0");
    if (!(s > -1.0 && s < 0.0))
        throw std::invalid_argument("contour_power_scalar: s outside (-1,0)");
    if (contour.node_count < 2 || contour.node_count % 2 != 0)
        throw std::invalid_argument("contour_power_scalar: node_count must be even and >= 2");
    if (!(contour.axis_extent >= 100.0 * lambda))
        throw std::invalid_argument("contour_power_scalar: axis extent below 100*lambda");

    // Trapezoid in x = log(t/lambda); nodes are mirrored onto the lower
    // half-axis so the branch and orientation enter through std::pow itself.
    const double L1 = 40.0 / (1.0 + s);
    const double L2 = std::log(contour.axis_extent / lambda);
    const int n = contour.node_count;
    const double h = (L1 + L2) / n;
    std::complex<double> sum = 0.0;
    const std::complex<double> lam(lambda, 0.0);
    for (int i = 0; i <= n; ++i) {
        double x = -L1 + i * h;
        double t = lambda * std::exp(x);
        std::complex<double> zp(0.0, t), zm(0.0, -t);
        std::complex<double> g =
            (std::pow(zp, s) / (lam - zp) + std::pow(zm, s) / (lam - zm)) * t;
        sum += (i == 0 || i == n) ? 0.5 * g : g;
    }
    std::complex<double> body = sum * h / kTwoPi;

    // Analytic tail over |t| > R: folding the two half-axes gives
    // (lambda^s/pi) int_0^{lambda/R} (u^{-s} cos a - u^{-s-1} sin a)/(1+u^2) du,
    // a = pi s/2, expanded in powers of u^2 <= (lambda/R)^2.
    const double a = 0.5 * kPi * s;
    const double ca = std::cos(a), sa = std::sin(a);
    const double u0 = lambda / contour.axis_extent;
    double tail = 0.0;
    double sign = 1.0;
    for (int k = 0; k < 6; ++k) {
        double p1 = -s + 2.0 * k + 1.0;  // from u^{-s+2k}
        double p2 = -s + 2.0 * k;        // from u^{-s-1+2k}
        tail += sign * (ca * std::pow(u0, p1) / p1 - sa * std::pow(u0, p2) / p2);
        sign = -sign;
    }
    tail *= std::pow(lambda, s) / kPi;

    return body + tail;
}

// max|f| / ||f||_{H^{n/2+eps}} with the Sobolev norm
// (sum (1+lambda)^{n/2+eps} |a|^2)^{1/2} on the grid.
inline double linfty_embedding_check(const Field& f, double epsilon, const Basis& basis) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("linfty_embedding_check: epsilon <= 0");
    const double n = double(f.grid->manifold.dim);
    SpectralCoeffs sc = analyze(f, basis);
    double norm2 = 0.0;
    for (std::size_t k = 0; k < basis.pairs.size(); ++k)
        norm2 += std::pow(1.0 + basis.pairs[k].lambda, 0.5 * n + epsilon) *
                 std::norm(sc.coeffs[k]);
    return linf_norm(f) / std::sqrt(norm2);
}

}  // namespace fraclab
