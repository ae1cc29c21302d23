#include "juliadim/beta.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace juliadim {

namespace {

double cross(cplx o, cplx a, cplx b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) -
           (a.imag() - o.imag()) * (b.real() - o.real());
}

}  // namespace

std::vector<cplx> convex_hull(std::vector<cplx> pts) {
    auto less = [](cplx a, cplx b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    };
    std::sort(pts.begin(), pts.end(), less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n < 3) return pts;

    // Andrew's monotone chain
    std::vector<cplx> h(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

double min_width(const std::vector<cplx>& hull) {
    const std::size_t n = hull.size();
    if (n < 3) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    std::size_t j = 1;
    for (std::size_t i = 0; i < n; ++i) {
        cplx a = hull[i], b = hull[(i + 1) % n];
        double len = std::abs(b - a);
        if (len == 0.0) continue;
        // advance the antipodal vertex while the distance to edge (a,b) grows
        while (cross(a, b, hull[(j + 1) % n]) > cross(a, b, hull[j]))
            j = (j + 1) % n;
        best = std::min(best, cross(a, b, hull[j]) / len);
    }
    return best;
}

double hull_diameter(const std::vector<cplx>& hull) {
    const std::size_t n = hull.size();
    if (n == 1) return 0.0;
    if (n == 2) return std::abs(hull[1] - hull[0]);
    double best = 0.0;
    std::size_t j = 1;
    for (std::size_t i = 0; i < n; ++i) {
        cplx a = hull[i], b = hull[(i + 1) % n];
        while (cross(a, b, hull[(j + 1) % n]) > cross(a, b, hull[j]))
            j = (j + 1) % n;
        best = std::max({best, std::abs(hull[j] - a), std::abs(hull[j] - b)});
    }
    return best;
}

BetaValue beta_at(const std::vector<cplx>& cloud, cplx x, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("beta_at: radius must be > 0");
    std::vector<cplx> in;
    for (const cplx& z : cloud)
        if (std::abs(z - x) <= r) in.push_back(z);
    BetaValue v;
    v.count = in.size();
    v.empty = in.empty();
    if (in.size() < 3) return v;
    v.beta = std::min(1.0, min_width(convex_hull(std::move(in))) / (2.0 * r));
    return v;
}

BetaProfile beta_profile(const std::vector<cplx>& cloud, cplx x, int N, std::size_t floor) {
    if (N < 1) throw std::invalid_argument("beta_profile: depth must be >= 1");
    BetaProfile prof;
    prof.base = x;
    if (cloud.empty()) return prof;
    prof.diam = hull_diameter(convex_hull(cloud));
    if (prof.diam == 0.0) return prof;

    // sort once by distance to x, every ball is then a prefix
    std::vector<std::pair<double, cplx>> by;
    by.reserve(cloud.size());
    for (const cplx& z : cloud) by.push_back({std::abs(z - x), z});
    std::sort(by.begin(), by.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<cplx> ball;
    for (int n = 0; n <= N; ++n) {
        double r = std::ldexp(prof.diam, -n);
        auto end = std::upper_bound(by.begin(), by.end(), r,
                                    [](double v, const auto& e) { return v < e.first; });
        std::size_t cnt = static_cast<std::size_t>(end - by.begin());
        if (cnt < floor) break;  // below resolution: truncate, never report 0
        ball.clear();
        for (auto it = by.begin(); it != end; ++it) ball.push_back(it->second);
        double w = ball.size() < 3 ? 0.0 : min_width(convex_hull(ball));
        prof.scales.push_back(r);
        prof.betas.push_back(std::min(1.0, w / (2.0 * r)));
        prof.counts.push_back(cnt);
    }
    return prof;
}

double mean_wiggliness(const BetaProfile& profile, double r) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("mean_wiggliness: need 0 < r < 1");
    double s = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < profile.scales.size(); ++i) {
        if (profile.scales[i] < r) continue;
        s += profile.betas[i] * profile.betas[i];
        ++used;
    }
    if (used == 0) throw std::invalid_argument("mean_wiggliness: no admissible scales in range");
    return std::log(2.0) * s / std::log(1.0 / r);
}

void validate(const FlatnessFamily& f) {
    if (f.thresholds.empty() || f.thresholds.size() != f.densities.size())
        throw std::invalid_argument("flatness family: thresholds and densities must match");
    for (std::size_t i = 0; i < f.thresholds.size(); ++i) {
        if (!(f.thresholds[i] > 0.0 && f.thresholds[i] <= 1.0))
            throw std::invalid_argument("flatness family: thresholds must lie in (0, 1]");
        if (i > 0 && !(f.thresholds[i] > f.thresholds[i - 1]))
            throw std::invalid_argument("flatness family: thresholds must increase");
        if (!(f.densities[i] >= 0.0 && f.densities[i] <= 1.0))
            throw std::invalid_argument("flatness family: densities must lie in [0, 1]");
    }
    if (f.thresholds.back() != 1.0)
        throw std::invalid_argument("flatness family: last threshold must be 1");
}

double almost_flat_bound(const FlatnessFamily& family, double C_prime) {
    validate(family);
    double s = 0.0;
    for (std::size_t i = 0; i < family.thresholds.size(); ++i)
        s += family.densities[i] * family.thresholds[i] * family.thresholds[i];
    return 1.0 + C_prime * s;
}

FlatnessFamily ladder_family(double epsilon, double C4) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("ladder: need 0 < eps < 1");
    if (!(C4 > 0.0)) throw std::invalid_argument("ladder: C4 must be > 0");
    FlatnessFamily f;
    const double L = std::pow(std::abs(std::log(epsilon)), 1.5);
    for (int j = 1;; ++j) {
        double b = C4 * std::ldexp(std::sqrt(epsilon), j - 1);
        bool top = b >= 1.0;
        f.thresholds.push_back(top ? 1.0 : b);
        f.densities.push_back(std::min(1.0, std::ldexp(L, -j)));
        if (top) break;
    }
    return f;
}

double good_scale_density(const BetaProfile& profile, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw std::invalid_argument("good_scale_density: threshold must lie in (0, 1]");
    if (profile.betas.empty()) throw std::invalid_argument("good_scale_density: empty profile");
    std::size_t good = std::count_if(profile.betas.begin(), profile.betas.end(),
                                     [&](double b) { return b <= threshold; });
    return static_cast<double>(good) / profile.betas.size();
}

}  // namespace juliadim
