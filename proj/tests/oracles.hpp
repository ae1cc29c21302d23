#pragma once

// Reference computations that share no code with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

inline const double kPi = 3.14159265358979323846;

// Width of the thinnest slab with normal direction theta.
inline double slab_width(const std::vector<cplx>& pts, double theta) {
    const double nx = -std::sin(theta), ny = std::cos(theta);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (cplx z : pts) {
        double s = z.real() * nx + z.imag() * ny;
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    return hi - lo;
}

// Brute force beta: slab widths over a uniform grid of directions plus every
// direction spanned by a pair of points. The optimal slab is parallel to a
// hull edge, so the pair directions make the minimum exact.
inline double beta_brute(const std::vector<cplx>& cloud, cplx x, double r, int directions = 10000) {
    std::vector<cplx> in;
    for (cplx z : cloud)
        if (std::abs(z - x) <= r) in.push_back(z);
    if (in.size() < 3) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < directions; ++k) best = std::min(best, slab_width(in, kPi * k / directions));
    for (std::size_t i = 0; i < in.size(); ++i)
        for (std::size_t j = i + 1; j < in.size(); ++j) {
            cplx d = in[j] - in[i];
            if (std::abs(d) > 0.0) best = std::min(best, slab_width(in, std::arg(d)));
        }
    return best / (2.0 * r);
}

// Root of sum r_i^s = 1 by plain bisection.
inline double moran_bisect(const std::vector<double>& ratios) {
    auto g = [&](double s) {
        double acc = -1.0;
        for (double r : ratios) acc += std::pow(r, s);
        return acc;
    };
    double a = 0.0, b = 1.0;
    while (g(b) > 0.0) b *= 2.0;
    for (int i = 0; i < 200 && b - a > 1e-16; ++i) {
        double m = 0.5 * (a + b);
        (g(m) > 0.0 ? a : b) = m;
    }
    return 0.5 * (a + b);
}

// Invariant probability of the Chebyshev map x^2 - 2 on [-2, 2].
inline double chebyshev_cdf(double x) {
    x = std::clamp(x, -2.0, 2.0);
    return 0.5 + std::asin(x / 2.0) / kPi;
}

// Its mass in the ball B(-2, r).
inline double chebyshev_ball(double r) { return chebyshev_cdf(-2.0 + r); }

// Antiderivative of log(1/r) r^(alpha-1): integral of log(1/r)/r d(r^alpha) up to a factor alpha.
inline double O_power_antiderivative(double r, double alpha) {
    return std::pow(r, alpha) * (alpha * std::log(1.0 / r) + 1.0) / (alpha * alpha);
}

// O(eps) for sigma(r) = r^alpha integrated over [a, eps].
inline double O_power(double a, double eps, double alpha) {
    return O_power_antiderivative(eps, alpha) - O_power_antiderivative(a, alpha);
}

// I over [eps, R] for sigma(r) = sqrt(r): F(r) = r^(-1/2) (log r + 2).
inline double I_sqrt(double eps, double R) {
    auto F = [](double r) { return (std::log(r) + 2.0) / std::sqrt(r); };
    return F(R) - F(eps);
}

// Least-squares slope of log y on log x.
inline double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double u = std::log(xs[i]), v = std::log(ys[i]);
        sx += u;
        sy += v;
        sxx += u * u;
        sxy += u * v;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Direct product of |2 f^k(c)| for k < n.
inline double direct_derivative(double c, int n) {
    double x = c, d = 1.0;
    for (int k = 0; k < n; ++k) {
        d *= std::abs(2.0 * x);
        x = x * x + c;
    }
    return d;
}

}  // namespace oracle
