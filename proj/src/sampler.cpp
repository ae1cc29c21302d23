#include "juliadim/sampler.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace juliadim {

PointCloud sample_inverse(const Parameter& param, std::size_t count, std::uint64_t seed,
                          std::size_t burn_in) {
    if (burn_in < 50) throw std::invalid_argument("sample_inverse: burn_in must be >= 50");
    PointCloud cloud;
    cloud.param = param;
    cloud.seed = seed;
    cloud.burn_in = burn_in;
    cloud.points.reserve(count);

    std::mt19937_64 rng(seed);
    std::uint64_t bits = 0;
    int left = 0;
    const cplx c = param.c;
    cplx z = fixed_points(param).p;
    for (std::size_t k = 0; k < burn_in + count; ++k) {
        if (left == 0) {
            bits = rng();
            left = 64;
        }
        cplx w = std::sqrt(z - c);
        z = (bits & 1u) ? -w : w;
        bits >>= 1;
        --left;
        if (k >= burn_in) cloud.points.push_back(z);
    }
    return cloud;
}

double strip_extent(const PointCloud& cloud) {
    if (cloud.points.empty()) throw std::invalid_argument("strip_extent: empty cloud");
    double m = 0.0;
    for (const cplx& z : cloud.points) m = std::max(m, std::abs(z.imag()));
    return m;
}

namespace {

void check_exterior(double c, int n) {
    if (!(c < -2.0)) throw std::invalid_argument("interval_cover: needs real c < -2");
    if (n < 0 || n > 40) throw std::invalid_argument("interval_cover: depth must be in [0, 40]");
    if (n > kMaxCoverDepth)
        throw std::length_error("interval_cover: depth above storage cap of 2^26 components");
}

}  // namespace

IntervalCover interval_cover(const Parameter& param, int n) {
    if (!param.real) throw std::invalid_argument("interval_cover: needs real c < -2");
    const double c = param.re();
    check_exterior(c, n);
    const double p = real_fixed_points(c).p;

    std::vector<Interval> cur{{-p, p, std::log(2.0 * p)}};
    std::vector<Interval> next;
    for (int d = 0; d < n; ++d) {
        const std::size_t m = cur.size();
        next.resize(2 * m);
        for (std::size_t i = 0; i < m; ++i) {
            const Interval& I = cur[i];
            double sa = std::sqrt(I.left - c), sb = std::sqrt(I.right - c);
            // sqrt(b-c) - sqrt(a-c) = (b-a)/(sqrt(a-c)+sqrt(b-c))
            double ll = I.log_length - std::log(sa + sb);
            next[m + i] = {sa, sb, ll};
            next[m - 1 - i] = {-sb, -sa, ll};
        }
        cur.swap(next);
    }
    IntervalCover cov;
    cov.depth = n;
    cov.components = std::move(cur);
    for (const Interval& I : cov.components) cov.total_length += std::exp(I.log_length);
    return cov;
}

std::vector<double> half_cover_log_lengths(double c, int n) {
    check_exterior(c, n);
    if (n < 1) throw std::invalid_argument("half_cover_log_lengths: depth must be >= 1");
    const double p = real_fixed_points(c).p;
    // only left endpoints and log lengths are needed going down
    std::vector<double> a{-p}, b{p}, ll{std::log(2.0 * p)};
    for (int d = 0; d < n; ++d) {
        const std::size_t m = a.size();
        const bool last = d == n - 1;
        std::vector<double> na, nb, nl;
        std::size_t out = last ? m : 2 * m;
        na.resize(out);
        nb.resize(out);
        nl.resize(out);
        for (std::size_t i = 0; i < m; ++i) {
            double sa = std::sqrt(a[i] - c), sb = std::sqrt(b[i] - c);
            double l = ll[i] - std::log(sa + sb);
            na[i] = sa;
            nb[i] = sb;
            nl[i] = l;
            if (!last) {
                na[m + i] = -sb;
                nb[m + i] = -sa;
                nl[m + i] = l;
            }
        }
        a.swap(na);
        b.swap(nb);
        ll.swap(nl);
    }
    return ll;
}

}  // namespace juliadim
