#pragma once

// Gamma and the modified Bessel function of the second kind K_nu for real
// order and complex argument with positive real part. K is evaluated from
// the integral representation
//     K_nu(w) = int_0^inf exp(-w cosh t) cosh(nu t) dt,   Re(w) > 0,
// with adaptive truncation, which stays valid on the whole domain needed by
// the resolvent-parametrix contour arguments.

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fraclab/quadrature.hpp"

namespace fraclab {

using Complex = std::complex<double>;

inline double gamma_fn(double x) {
    if (x <= 0.0 && x == std::floor(x))
        throw std::domain_error("gamma_fn: pole at nonpositive integer");
    return std::tgamma(x);
}

inline double abs_gamma_neg(double s) {
    // |Gamma(-s)| for s in (-1,1)\{0}.
    return std::abs(gamma_fn(-s));
}

struct BesselOrder {
    double nu = 0.0;
};

// Truncation point: beyond T the integrand magnitude is below 1e-20 relative
// to its scale. Solves Re(w) cosh T - |nu| T ~ threshold by fixed point.
inline double bessel_k_cutoff(double re_w, double nu) {
    double thr = 760.0;
    double t = std::acosh(std::max(2.0, thr / re_w));
    for (int i = 0; i < 4; ++i)
        t = std::acosh(std::max(2.0, (thr + std::abs(nu) * t) / re_w));
    return t;
}

inline Complex bessel_k(BesselOrder order, Complex w) {
    if (!(w.real() > 0.0)) throw std::domain_error("bessel_k: Re(w) <= 0");
    const double nu = std::abs(order.nu);  // K_{-nu} = K_nu
    const double T = bessel_k_cutoff(w.real(), nu);
    auto integrand = [&](double t) -> Complex {
        return std::exp(-w * std::cosh(t)) * std::cosh(nu * t);
    };
    // Absolute tolerance scaled to a cheap magnitude estimate of the result.
    static const GaussLegendre probe = gauss_legendre(24);
    double scale = std::abs(gl_integrate(integrand, 0.0, T, probe));
    scale = std::max(scale, std::numeric_limits<double>::min() * 1e8);
    return adaptive_integrate(integrand, 0.0, T, 1e-11 * scale);
}

inline double bessel_k(double nu, double w) {
    return bessel_k(BesselOrder{nu}, Complex(w, 0.0)).real();
}

struct BesselBoundResult {
    double c_small = 0.0;  // sup_{w<=1} |K_l(w)| w^l   (l > 0 only)
    double c_large = 0.0;  // sup_{w>1}  |K_l(w)| e^w
    bool holds = false;
    bool small_branch_checked = false;  // false for l = 0 (log singularity)
};

// Empirical suprema for the two-branch bound on K_l over positive samples.
// For l = 0 the w^{-l} reading fails near 0 (K_0 ~ -log w), so the small-w
// branch is skipped and flagged instead.
inline BesselBoundResult bessel_k_bound_check(double ell, const std::vector<double>& samples) {
    if (ell < 0.0) throw std::invalid_argument("bessel_k_bound_check: ell < 0");
    BesselBoundResult r;
    r.small_branch_checked = ell > 0.0;
    for (double w : samples) {
        if (!(w > 0.0)) throw std::invalid_argument("bessel_k_bound_check: w <= 0");
        double k = bessel_k(ell, w);
        if (w <= 1.0) {
            if (ell > 0.0) r.c_small = std::max(r.c_small, k * std::pow(w, ell));
        } else {
            r.c_large = std::max(r.c_large, k * std::exp(w));
        }
    }
    r.holds = std::isfinite(r.c_small) && std::isfinite(r.c_large);
    return r;
}

}  // namespace fraclab
