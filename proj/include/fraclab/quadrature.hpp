#pragma once

// Shared quadrature building blocks: Gauss-Legendre rules, adaptive Simpson
// integration for real and complex integrands, and geometric panel layouts
// used by the time integrals in the heat route.

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace fraclab {

struct GaussLegendre {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Nodes via Newton iteration on the Legendre recurrence.
inline GaussLegendre gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
    GaussLegendre q;
    q.nodes.resize(n);
    q.weights.resize(n);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int l = 2; l <= n; ++l) {
                double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.nodes[i] = -x;
        q.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        q.weights[i] = w;
        q.weights[n - 1 - i] = w;
    }
    return q;
}

template <class F>
auto gl_integrate(F&& f, double a, double b, const GaussLegendre& q) {
    using R = std::invoke_result_t<F, double>;
    R sum{};
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < q.nodes.size(); ++i)
        sum += q.weights[i] * f(mid + half * q.nodes[i]);
    return R(half * sum);
}

namespace detail {

template <class F, class R>
R adaptive_simpson_rec(F& f, double a, double b, R fa, R fm, R fb, R whole,
                       double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    R flm = f(lm), frm = f(rm);
    R left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    R right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    R delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson on [a, b]. tol is an absolute tolerance on the result.
template <class F>
auto adaptive_integrate(F&& f, double a, double b, double tol, int max_depth = 48) {
    using R = std::invoke_result_t<F, double>;
    if (!(b > a)) return R{};
    // Seed with a few panels so narrow features are not missed.
    const int seed = 8;
    R total{};
    const double h = (b - a) / seed;
    for (int k = 0; k < seed; ++k) {
        double x0 = a + k * h, x1 = x0 + h, xm = 0.5 * (x0 + x1);
        R f0 = f(x0), fm = f(xm), f1 = f(x1);
        R whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += detail::adaptive_simpson_rec(f, x0, x1, f0, fm, f1, whole,
                                              tol / seed, max_depth);
    }
    return total;
}

// Geometric subdivision of [t0, t1] with the given ratio; returns panel edges.
inline std::vector<double> geometric_panels(double t0, double t1, double ratio) {
    if (!(t0 > 0.0) || !(t1 > t0) || !(ratio > 1.0))
        throw std::invalid_argument("geometric_panels: bad range");
    std::vector<double> edges{t0};
    double t = t0;
    while (t < t1) {
        t = std::min(t * ratio, t1);
        edges.push_back(t);
    }
    return edges;
}

// Integrate f over [t0, t1] with a fixed Gauss rule per geometric panel.
template <class F>
double panel_integrate(F&& f, double t0, double t1, double ratio,
                       const GaussLegendre& q) {
    auto edges = geometric_panels(t0, t1, ratio);
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k)
        sum += gl_integrate(f, edges[k], edges[k + 1], q);
    return sum;
}

}  // namespace fraclab
