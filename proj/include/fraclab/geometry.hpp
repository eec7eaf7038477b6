#pragma once

// Model manifolds: flat tori T^n = R^n/(2 pi Z)^n for n in {1,2} and the
// round unit sphere S^2. Closed-form geodesic distance, exponential-map
// volume density, quadrature grids and L2-orthonormal eigenbases.

#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>
#include <vector>

#include "fraclab/quadrature.hpp"

namespace fraclab {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class ManifoldKind { Torus, Sphere };

struct Manifold {
    ManifoldKind kind;
    int dim;                    // 1 or 2
    double ricci_lower;         // torus: 0, unit S^2: 1
    double injectivity_radius;  // pi for all models here

    static Manifold torus(int n) {
        if (n < 1 || n > 2) throw std::invalid_argument("torus: dim must be 1 or 2");
        return Manifold{ManifoldKind::Torus, n, 0.0, kPi};
    }
    static Manifold sphere() { return Manifold{ManifoldKind::Sphere, 2, 1.0, kPi}; }

    double volume() const {
        if (kind == ManifoldKind::Torus) return std::pow(kTwoPi, dim);
        return 4.0 * kPi;
    }
    double diameter() const {
        if (kind == ManifoldKind::Torus) return kPi * std::sqrt(double(dim));
        return kPi;
    }
};

// Chart coordinates. Torus: dim angles in [0, 2pi). Sphere: (theta, phi) with
// colatitude theta in [0, pi].
struct Point {
    std::array<double, 2> c{0.0, 0.0};
};

inline double wrap_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

inline Point make_point(const Manifold& m, double c0, double c1 = 0.0) {
    Point p;
    if (m.kind == ManifoldKind::Torus) {
        p.c[0] = wrap_angle(c0);
        p.c[1] = m.dim > 1 ? wrap_angle(c1) : 0.0;
    } else {
        double theta = c0;
        if (theta < 0.0 || theta > kPi) {
            theta = std::fmod(theta, kTwoPi);
            if (theta < 0.0) theta += kTwoPi;
            if (theta > kPi) {
                theta = kTwoPi - theta;
                c1 += kPi;
            }
        }
        p.c[0] = theta;
        p.c[1] = wrap_angle(c1);
    }
    return p;
}

inline std::array<double, 3> sphere_embed(const Point& p) {
    double st = std::sin(p.c[0]);
    return {st * std::cos(p.c[1]), st * std::sin(p.c[1]), std::cos(p.c[0])};
}

// cos of the central angle between two sphere points.
inline double sphere_cos_angle(const Point& x, const Point& y) {
    auto a = sphere_embed(x), b = sphere_embed(y);
    double d = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    return std::min(1.0, std::max(-1.0, d));
}

inline double geodesic_distance(const Manifold& m, const Point& x, const Point& y) {
    if (m.kind == ManifoldKind::Sphere) return std::acos(sphere_cos_angle(x, y));
    // Coordinates are canonical, so the nearest image is at most one cell away.
    double s = 0.0;
    for (int j = 0; j < m.dim; ++j) {
        double d = std::abs(x.c[j] - y.c[j]);
        d = std::min(d, kTwoPi - d);
        s += d * d;
    }
    return std::sqrt(s);
}

// Volume density Theta(x,y) of exp_x in normal coordinates; torus: 1,
// sphere: sin(d)/d with Theta(x,x) = 1.
inline double jacobian_theta(const Manifold& m, const Point& x, const Point& y) {
    double d = geodesic_distance(m, x, y);
    if (d >= m.injectivity_radius)
        throw std::domain_error("jacobian_theta: d(x,y) >= injectivity radius");
    if (m.kind == ManifoldKind::Torus) return 1.0;
    if (d < 1e-8) return 1.0 - d * d / 6.0;
    return std::sin(d) / d;
}

inline double theta_radial(const Manifold& m, double d) {
    if (m.kind == ManifoldKind::Torus) return 1.0;
    if (d < 1e-8) return 1.0 - d * d / 6.0;
    return std::sin(d) / d;
}

struct Grid {
    Manifold manifold;
    int resolution = 0;
    std::vector<Point> points;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }
    // Nominal mesh width used by epsilon rules.
    double spacing() const {
        if (manifold.kind == ManifoldKind::Torus) return kTwoPi / resolution;
        return kPi / resolution;
    }
};

using GridPtr = std::shared_ptr<const Grid>;

// Torus: uniform product grid (exact for trigonometric polynomials below the
// Nyquist band). Sphere: Gauss-Legendre in cos(theta) x uniform longitude
// with 2*resolution azimuthal points.
inline GridPtr build_grid(const Manifold& m, int resolution) {
    if (resolution < 4) throw std::invalid_argument("build_grid: resolution < 4");
    auto g = std::make_shared<Grid>();
    g->manifold = m;
    g->resolution = resolution;
    if (m.kind == ManifoldKind::Torus) {
        const double h = kTwoPi / resolution;
        if (m.dim == 1) {
            for (int i = 0; i < resolution; ++i) {
                g->points.push_back(make_point(m, i * h));
                g->weights.push_back(h);
            }
        } else {
            for (int i = 0; i < resolution; ++i)
                for (int j = 0; j < resolution; ++j) {
                    g->points.push_back(make_point(m, i * h, j * h));
                    g->weights.push_back(h * h);
                }
        }
    } else {
        auto gl = gauss_legendre(resolution);
        const int nphi = 2 * resolution;
        const double hphi = kTwoPi / nphi;
        for (int i = 0; i < resolution; ++i) {
            double theta = std::acos(gl.nodes[i]);
            double wtheta = gl.weights[i];
            for (int j = 0; j < nphi; ++j) {
                g->points.push_back(make_point(m, theta, j * hphi));
                g->weights.push_back(wtheta * hphi);
            }
        }
    }
    return g;
}

struct Field {
    GridPtr grid;
    std::vector<std::complex<double>> values;

    Field() = default;
    explicit Field(GridPtr g) : grid(std::move(g)), values(grid->size(), 0.0) {}
};

inline void require_same_grid(const Field& a, const Field& b) {
    if (a.grid != b.grid) throw std::invalid_argument("fields on different grids");
}

inline std::complex<double> weighted_inner(const Field& f, const Field& g) {
    require_same_grid(f, g);
    std::complex<double> s = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        s += f.grid->weights[i] * std::conj(g.values[i]) * f.values[i];
    return s;
}

inline std::complex<double> weighted_mean(const Field& f) {
    std::complex<double> s = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        s += f.grid->weights[i] * f.values[i];
    return s / f.grid->manifold.volume();
}

inline double l2_norm(const Field& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        s += f.grid->weights[i] * std::norm(f.values[i]);
    return std::sqrt(s);
}

inline double linf_norm(const Field& f) {
    double s = 0.0;
    for (const auto& v : f.values) s = std::max(s, std::abs(v));
    return s;
}

inline Field operator-(const Field& a, const Field& b) {
    require_same_grid(a, b);
    Field r(a.grid);
    for (std::size_t i = 0; i < a.values.size(); ++i)
        r.values[i] = a.values[i] - b.values[i];
    return r;
}

inline Field operator+(const Field& a, const Field& b) {
    require_same_grid(a, b);
    Field r(a.grid);
    for (std::size_t i = 0; i < a.values.size(); ++i)
        r.values[i] = a.values[i] + b.values[i];
    return r;
}

inline Field operator*(std::complex<double> c, const Field& a) {
    Field r(a.grid);
    for (std::size_t i = 0; i < a.values.size(); ++i) r.values[i] = c * a.values[i];
    return r;
}

struct EigenPair {
    double lambda = 0.0;
    std::vector<double> values;  // samples on the owning grid
};

struct Basis {
    GridPtr grid;
    int band_limit = 0;
    std::vector<EigenPair> pairs;
};

namespace detail {

// Orthonormal spherical harmonics S_lm(theta) (theta part, 4pi-normalized)
// via the standard stable normalized recurrence. Returns S_lm for all l<=L
// at fixed m; caller assembles cos/sin(m phi) factors.
inline void normalized_plm(int L, int m, double ct, double st, std::vector<double>& out) {
    out.assign(L + 1, 0.0);
    double smm = std::sqrt(1.0 / (4.0 * kPi));
    for (int k = 1; k <= m; ++k)
        smm *= st * std::sqrt((2.0 * k + 1.0) / (2.0 * k));
    if (m <= L) out[m] = smm;
    if (m + 1 <= L) out[m + 1] = std::sqrt(2.0 * m + 3.0) * ct * smm;
    for (int l = m + 2; l <= L; ++l) {
        double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
        double b = std::sqrt(((2.0 * l + 1.0) / (2.0 * l - 3.0)) *
                             ((double(l - 1) * (l - 1) - double(m) * m) /
                              (double(l) * l - double(m) * m)));
        out[l] = a * ct * out[l - 1] - b * out[l - 2];
    }
}

}  // namespace detail

inline int nyquist_band_limit(const Grid& g) {
    if (g.manifold.kind == ManifoldKind::Torus) return g.resolution / 2 - 1;
    return g.resolution - 1;
}

// L2-orthonormal real eigenbasis of -Laplace_g on the grid, in increasing
// eigenvalue order within each mode family.
inline Basis eigenbasis(const GridPtr& grid, int band_limit) {
    if (band_limit < 0) throw std::invalid_argument("eigenbasis: band_limit < 0");
    if (band_limit > nyquist_band_limit(*grid))
        throw std::invalid_argument("eigenbasis: band_limit beyond grid Nyquist limit");
    const Manifold& m = grid->manifold;
    Basis basis;
    basis.grid = grid;
    basis.band_limit = band_limit;
    const std::size_t npts = grid->size();

    auto add = [&](double lambda, auto&& eval) {
        EigenPair ep;
        ep.lambda = lambda;
        ep.values.resize(npts);
        for (std::size_t i = 0; i < npts; ++i) ep.values[i] = eval(grid->points[i]);
        basis.pairs.push_back(std::move(ep));
    };

    if (m.kind == ManifoldKind::Torus && m.dim == 1) {
        const double c0 = 1.0 / std::sqrt(kTwoPi), c1 = 1.0 / std::sqrt(kPi);
        add(0.0, [&](const Point&) { return c0; });
        for (int k = 1; k <= band_limit; ++k) {
            add(double(k) * k, [&](const Point& p) { return c1 * std::cos(k * p.c[0]); });
            add(double(k) * k, [&](const Point& p) { return c1 * std::sin(k * p.c[0]); });
        }
    } else if (m.kind == ManifoldKind::Torus) {
        const double c0 = 1.0 / kTwoPi;
        const double c1 = std::sqrt(2.0) / kTwoPi;
        add(0.0, [&](const Point&) { return c0; });
        // One representative per +/-k pair: k1 > 0, or k1 == 0 and k2 > 0.
        for (int k1 = 0; k1 <= band_limit; ++k1) {
            for (int k2 = -band_limit; k2 <= band_limit; ++k2) {
                if (k1 == 0 && k2 <= 0) continue;
                double lambda = double(k1) * k1 + double(k2) * k2;
                add(lambda, [&](const Point& p) {
                    return c1 * std::cos(k1 * p.c[0] + k2 * p.c[1]);
                });
                add(lambda, [&](const Point& p) {
                    return c1 * std::sin(k1 * p.c[0] + k2 * p.c[1]);
                });
            }
        }
    } else {
        std::vector<double> plm;
        for (int l = 0; l <= band_limit; ++l)
            add(double(l) * (l + 1), [&](const Point& p) {
                detail::normalized_plm(l, 0, std::cos(p.c[0]), std::sin(p.c[0]), plm);
                return plm[l];
            });
        for (int mm = 1; mm <= band_limit; ++mm) {
            for (int l = mm; l <= band_limit; ++l) {
                double lambda = double(l) * (l + 1);
                add(lambda, [&](const Point& p) {
                    detail::normalized_plm(l, mm, std::cos(p.c[0]), std::sin(p.c[0]), plm);
                    return std::sqrt(2.0) * plm[l] * std::cos(mm * p.c[1]);
                });
                add(lambda, [&](const Point& p) {
                    detail::normalized_plm(l, mm, std::cos(p.c[0]), std::sin(p.c[0]), plm);
                    return std::sqrt(2.0) * plm[l] * std::sin(mm * p.c[1]);
                });
            }
        }
    }
    return basis;
}

// Legendre polynomial P_l(x), simple three-term recurrence.
inline double legendre_p(int l, double x) {
    if (l == 0) return 1.0;
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= l; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

}  // namespace fraclab
