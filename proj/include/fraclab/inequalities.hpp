#pragma once

// Numerical harness for the fractional Sobolev embedding and the pointwise
// Cordoba-Cordoba / Constantin-Vicol inequalities, over seeded random
// band-limited ensembles.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "fraclab/geometry.hpp"
#include "fraclab/spectral.hpp"

namespace fraclab {

struct EnsembleSpec {
    int count = 0;
    int band_limit = 0;
    std::uint64_t seed = 0;
};

// Deterministic Gaussian stream: fixed 53-bit uniforms from mt19937_64 plus
// Box-Muller, so the draw sequence is identical across platforms.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : eng_(seed) {}

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(kTwoPi * u2);
        have_spare_ = true;
        return r * std::cos(kTwoPi * u2);
    }

private:
    double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Unit normal per mode, then normalized to unit L2 norm. The lambda = 0 mode
// is skipped: ensemble members are mean-zero.
inline Field random_field(const Basis& basis, GaussianSampler& rng) {
    SpectralCoeffs sc;
    sc.band_limit = basis.band_limit;
    sc.coeffs.resize(basis.pairs.size());
    double norm2 = 0.0;
    for (std::size_t k = 0; k < basis.pairs.size(); ++k) {
        double a = basis.pairs[k].lambda == 0.0 ? 0.0 : rng.normal();
        sc.coeffs[k] = a;
        norm2 += a * a;
    }
    if (norm2 == 0.0) throw std::runtime_error("random_field: empty band");
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& c : sc.coeffs) c *= inv;
    return synthesize(sc, basis);
}

inline double lp_norm(const Field& f, double p) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        s += f.grid->weights[i] * std::pow(std::abs(f.values[i]), p);
    return std::pow(s, 1.0 / p);
}

// ||f||_p / (||f||_2 + ||Lambda^s f||_2) with p = 2n/(n-2s) and
// Lambda = (-Laplace_g)^{1/2}, so Lambda^s has spectral multiplier
// lambda^{s/2}. All norms by grid quadrature.
inline double sobolev_ratio(const Field& f, double s, const Basis& basis) {
    if (f.grid->manifold.dim != 2)
        throw std::invalid_argument("sobolev_ratio: requires a 2-d manifold");
    if (!(s > 0.0 && s < 0.5))
        throw std::invalid_argument("sobolev_ratio: s outside (0, 1/2)");
    const double n = 2.0;
    const double p = 2.0 * n / (n - 2.0 * s);
    Field lsf = apply_multiplier(f, basis, [s](double lam) { return std::pow(lam, 0.5 * s); });
    return lp_norm(f, p) / (l2_norm(f) + l2_norm(lsf));
}

struct CordobaResult {
    double min_slack = 0.0;
    bool holds = false;
    double scale = 0.0;           // max magnitude of the two compared terms
    double aliasing_bound = 0.0;  // sup residual of f^2 outside the doubled band
    bool aliased = false;
};

// Precomputed refined grid and bases for repeated Cordoba checks at a fixed
// coarse grid / band (ensemble sweeps reuse this across members).
struct CordobaWorkspace {
    GridPtr fine;
    Basis basis_f;   // the input band, sampled on the fine grid
    Basis basis_sq;  // the doubled band for f^2
};

inline CordobaWorkspace make_cordoba_workspace(const GridPtr& grid, int band_limit) {
    CordobaWorkspace ws;
    ws.fine = build_grid(grid->manifold, 2 * grid->resolution);
    ws.basis_f = eigenbasis(ws.fine, band_limit);
    const int band2 = std::min(2 * band_limit, nyquist_band_limit(*ws.fine));
    ws.basis_sq = eigenbasis(ws.fine, band2);
    return ws;
}

// Pointwise check of 2 f Lambda^alpha f - Lambda^alpha(f^2) >= 0. The input
// is projected onto the given band; f^2 is formed on a 2x refined grid and
// re-expanded in the doubled band, so the product is alias-free for
// band-limited input.
inline CordobaResult cordoba_inequality_check(const Field& f, double alpha,
                                              const Basis& basis,
                                              const CordobaWorkspace& ws) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("cordoba_inequality_check: alpha outside (0,2)");
    SpectralCoeffs sc = analyze(f, basis);

    const GridPtr& fine = ws.fine;
    const Basis& basis_f = ws.basis_f;
    const Basis& basis_sq = ws.basis_sq;
    if (basis_f.band_limit != basis.band_limit)
        throw std::invalid_argument("cordoba_inequality_check: workspace band mismatch");

    Field ff = synthesize(sc, basis_f);
    SpectralCoeffs sc_l = sc;
    for (std::size_t k = 0; k < basis_f.pairs.size(); ++k)
        sc_l.coeffs[k] *= std::pow(basis_f.pairs[k].lambda, 0.5 * alpha);
    Field lf = synthesize(sc_l, basis_f);

    Field fsq(fine);
    for (std::size_t i = 0; i < fine->size(); ++i) {
        double v = ff.values[i].real();
        fsq.values[i] = v * v;
    }
    SpectralCoeffs sq = analyze(fsq, basis_sq);
    Field fsq_proj = synthesize(sq, basis_sq);

    CordobaResult res;
    res.aliasing_bound = linf_norm(fsq - fsq_proj);

    SpectralCoeffs sq_l = sq;
    for (std::size_t k = 0; k < basis_sq.pairs.size(); ++k)
        sq_l.coeffs[k] *= std::pow(basis_sq.pairs[k].lambda, 0.5 * alpha);
    Field lfsq = synthesize(sq_l, basis_sq);

    double min_slack = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (std::size_t i = 0; i < fine->size(); ++i) {
        double t1 = 2.0 * ff.values[i].real() * lf.values[i].real();
        double t2 = lfsq.values[i].real();
        min_slack = std::min(min_slack, t1 - t2);
        scale = std::max(scale, std::max(std::abs(t1), std::abs(t2)));
    }
    res.min_slack = min_slack;
    res.scale = scale;
    res.aliased = res.aliasing_bound > 1e-6 * std::max(scale, 1e-300);
    res.holds = !res.aliased && min_slack >= -1e-6 * scale;
    return res;
}

inline CordobaResult cordoba_inequality_check(const Field& f, double alpha,
                                              const Basis& basis) {
    return cordoba_inequality_check(f, alpha, basis,
                                    make_cordoba_workspace(f.grid, basis.band_limit));
}

// ---------------------------------------------------------------------------
// Constantin-Vicol probe (torus only).

// Exact spectral derivative of a band-limited periodic sample sequence
// (even point count) along one axis of the uniform torus grid.
namespace detail {

inline std::vector<double> periodic_diff_coeffs(int n) {
    if (n < 4 || n % 2 != 0)
        throw std::invalid_argument("periodic differentiation: even resolution >= 4 required");
    const double h = kTwoPi / n;
    std::vector<double> d(n, 0.0);
    double sign = -1.0;
    for (int k = 1; k < n; ++k) {
        d[k] = 0.5 * sign / std::tan(0.5 * k * h);
        sign = -sign;
    }
    return d;
}

}  // namespace detail

// Components of grad f on a uniform torus grid, via the exact periodic
// spectral differentiation stencil.
inline std::vector<Field> torus_gradient(const Field& f) {
    const Manifold& m = f.grid->manifold;
    if (m.kind != ManifoldKind::Torus)
        throw std::invalid_argument("torus_gradient: torus grids only");
    const int n = f.grid->resolution;
    const auto d = detail::periodic_diff_coeffs(n);
    std::vector<Field> grad(m.dim, Field(f.grid));
    if (m.dim == 1) {
        for (int i = 0; i < n; ++i) {
            std::complex<double> acc = 0.0;
            for (int k = 1; k < n; ++k) acc += d[k] * f.values[(i - k + n) % n];
            grad[0].values[i] = acc;
        }
        return grad;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::complex<double> a0 = 0.0, a1 = 0.0;
            for (int k = 1; k < n; ++k) {
                a0 += d[k] * f.values[std::size_t((i - k + n) % n) * n + j];
                a1 += d[k] * f.values[std::size_t(i) * n + (j - k + n) % n];
            }
            grad[0].values[std::size_t(i) * n + j] = a0;
            grad[1].values[std::size_t(i) * n + j] = a1;
        }
    return grad;
}

// Measurement of the displayed lower bound
//   grad f . Lambda^alpha grad f >= 1/2 |grad f|^2 + |grad f|^{2+alpha} / (c ||f||_inf^alpha)
// in two readings: with the local 1/2 |grad f|^2 term as displayed, and
// without it. For each admissible grid point the smallest c(x) making the
// bound hold is recorded; the global fit is the max over admissible points.
struct ConstantinVicolReport {
    std::vector<double> c_with_local;     // NaN at excluded points
    std::vector<double> c_without_local;  // NaN at excluded points
    double c_global_with = 0.0;
    double c_global_without = 0.0;
    int degenerate_points = 0;    // |grad f| negligible, excluded from the fit
    int inadmissible_points = 0;  // slack <= 0, no finite c (with-local reading)
};

inline ConstantinVicolReport constantin_vicol_probe(const Field& f, double alpha,
                                                    const Basis& basis) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("constantin_vicol_probe: alpha outside (0,1)");
    if (f.grid->manifold.kind != ManifoldKind::Torus)
        throw std::invalid_argument("constantin_vicol_probe: torus only");
    auto grad = torus_gradient(f);
    std::vector<Field> lgrad;
    for (const auto& g : grad)
        lgrad.push_back(apply_multiplier(g, basis, [alpha](double lam) {
            return std::pow(lam, 0.5 * alpha);
        }));

    const std::size_t npts = f.grid->size();
    const double fmax = linf_norm(f);
    double gmax = 0.0;
    for (const auto& g : grad) gmax = std::max(gmax, linf_norm(g));

    const double qnan = std::numeric_limits<double>::quiet_NaN();
    ConstantinVicolReport rep;
    rep.c_with_local.assign(npts, qnan);
    rep.c_without_local.assign(npts, qnan);
    for (std::size_t i = 0; i < npts; ++i) {
        double lhs = 0.0, g2 = 0.0;
        for (std::size_t c = 0; c < grad.size(); ++c) {
            lhs += grad[c].values[i].real() * lgrad[c].values[i].real();
            g2 += grad[c].values[i].real() * grad[c].values[i].real();
        }
        double gnorm = std::sqrt(g2);
        if (gnorm <= 1e-8 * gmax || fmax == 0.0) {
            ++rep.degenerate_points;
            continue;
        }
        double nonlinear = std::pow(gnorm, 2.0 + alpha) / std::pow(fmax, alpha);
        if (lhs > 0.0) {
            rep.c_without_local[i] = nonlinear / lhs;
            rep.c_global_without = std::max(rep.c_global_without, rep.c_without_local[i]);
        }
        double slack = lhs - 0.5 * g2;
        if (slack > 0.0) {
            rep.c_with_local[i] = nonlinear / slack;
            rep.c_global_with = std::max(rep.c_global_with, rep.c_with_local[i]);
        } else {
            ++rep.inadmissible_points;
        }
    }
    if (rep.inadmissible_points > 0)
        rep.c_global_with = std::numeric_limits<double>::infinity();
    return rep;
}

}  // namespace fraclab
