#include "juliadim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace juliadim {

OrbitSample typical_orbit(double c, std::size_t N, std::uint64_t seed, std::optional<double> x0,
                          std::size_t transient) {
    if (!(c >= -2.0 && c <= kDefaultC0)) throw std::invalid_argument("typical_orbit: needs c in [-2, c0]");
    if (N == 0) throw std::invalid_argument("typical_orbit: N must be positive");
    const RealFixed fp = real_fixed_points(c);
    const double p = fp.p, q = fp.q;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(c, c * c + c);

    OrbitSample o;
    o.c = c;
    o.seed = seed;
    o.transient = transient;
    o.x0 = x0 ? *x0 : unif(rng);
    if (!(std::abs(o.x0) <= p)) throw std::invalid_argument("typical_orbit: x0 outside [-p, p]");
    o.x.reserve(N);

    double x = o.x0;
    const std::size_t total = transient + N;
    for (std::size_t k = 0; k < total; ++k) {
        double y = x * x + c;
        if (!(std::abs(y) <= p * (1.0 + 1e-12))) throw std::runtime_error("typical_orbit: orbit left [-p, p]");
        // exact fixed points (and their preimage -p) are absorbing in floating point
        if (y == x || y == p || y == -p || y == q) {
            y = unif(rng);
            ++o.redraws;
        }
        x = y;
        if (k >= transient) o.x.push_back(x);
    }
    return o;
}

std::vector<double> log_radii(double hi, double lo, int count) {
    if (!(hi > lo && lo > 0.0) || count < 2) throw std::invalid_argument("log_radii: bad range");
    std::vector<double> r(count);
    const double a = std::log(hi), b = std::log(lo);
    for (int i = 0; i < count; ++i) r[i] = std::exp(a + (b - a) * i / (count - 1));
    r.front() = hi;
    r.back() = lo;
    return r;
}

SigmaEstimate sigma_ball(const OrbitSample& orbit, std::vector<double> radii) {
    if (radii.empty()) throw std::invalid_argument("sigma_ball: no radii");
    const double c = orbit.c;
    const double diam = std::abs(c * c + c - c);
    for (double r : radii)
        if (!(r > 0.0 && r <= diam * (1.0 + 1e-12))) throw std::invalid_argument("sigma_ball: radius outside (0, diam]");
    std::sort(radii.begin(), radii.end(), std::greater<>());

    // bucket j counts points whose smallest enclosing radius is radii[j]
    std::vector<std::size_t> bucket(radii.size(), 0);
    for (double x : orbit.x) {
        double d = std::abs(x - c);
        auto it = std::partition_point(radii.begin(), radii.end(), [d](double r) { return r > d; });
        std::size_t k = static_cast<std::size_t>(it - radii.begin());
        if (k > 0) ++bucket[k - 1];
    }
    SigmaEstimate s;
    s.center = c;
    s.radii = radii;
    s.orbit_length = orbit.x.size();
    s.x0 = orbit.x0;
    s.visits.assign(radii.size(), 0);
    std::size_t acc = 0;
    for (std::size_t j = radii.size(); j-- > 0;) {
        acc += bucket[j];
        s.visits[j] = acc;
    }
    for (std::size_t j = 0; j < radii.size(); ++j) {
        // the ball of radius diam is the whole invariant interval, endpoint included
        if (radii[j] >= diam) s.visits[j] = s.orbit_length;
        s.mass.push_back(static_cast<double>(s.visits[j]) / static_cast<double>(s.orbit_length));
        s.confident.push_back(s.visits[j] >= kConfidentVisits);
    }
    return s;
}

FitResult sigma_exponent(const SigmaEstimate& sig, double r_lo, double r_hi) {
    std::vector<double> xs, ys;
    for (std::size_t j = 0; j < sig.radii.size(); ++j)
        if (sig.confident[j] && sig.mass[j] > 0.0 && sig.radii[j] >= r_lo && sig.radii[j] <= r_hi) {
            xs.push_back(sig.radii[j]);
            ys.push_back(sig.mass[j]);
        }
    return fit_loglog(xs, ys);
}

std::vector<ReturnDepthRow> return_depth_density(const OrbitSample& orbit, double epsilon,
                                                 const std::vector<int>& p_grid,
                                                 const ReturnDepthOptions& opt) {
    if (!(opt.omega > 0.0 && opt.omega <= std::log(2.0) + 1e-15))
        throw std::invalid_argument("return_depth_density: omega must be in (0, log 2]");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("return_depth_density: bad epsilon");
    const double p0 = std::abs(std::log(epsilon)) / opt.omega;
    const std::size_t N = orbit.x.size();
    std::vector<ReturnDepthRow> rows;
    for (int p : p_grid) {
        if (p < p0 - 1e-9) throw std::invalid_argument("return_depth_density: p below p0");
        ReturnDepthRow row;
        row.p = p;
        row.r_p = opt.Omega1 * epsilon * std::exp(-(p - p0) * opt.omega) * opt.R_prime;
        std::size_t covered = 0, until = 0;  // indices < until are already in E_p
        for (std::size_t i = 0; i < N; ++i) {
            if (std::abs(orbit.x[i] - orbit.c) < row.r_p) {
                ++row.visits;
                std::size_t end = std::min(N, i + static_cast<std::size_t>(p));
                std::size_t start = std::max(i, until);
                if (end > start) covered += end - start;
                until = std::max(until, end);
            }
        }
        row.density = static_cast<double>(covered) / static_cast<double>(N);
        row.bound = p * static_cast<double>(row.visits) / static_cast<double>(N);
        row.confident = row.visits >= kConfidentVisits;
        rows.push_back(row);
    }
    return rows;
}

namespace {

struct Curve {
    std::vector<double> r, s;  // ascending radii
    bool dropped = false;
};

Curve ascending_confident(const SigmaEstimate& sig) {
    Curve c;
    for (std::size_t j = sig.radii.size(); j-- > 0;) {
        if (!sig.confident[j]) {
            c.dropped = true;
            continue;
        }
        c.r.push_back(sig.radii[j]);
        c.s.push_back(sig.mass[j]);
    }
    return c;
}

// sigma at r, linear in log r between grid points; clamped outside the grid
double eval(const Curve& c, double r) {
    if (r <= c.r.front()) return c.s.front();
    if (r >= c.r.back()) return c.s.back();
    auto it = std::upper_bound(c.r.begin(), c.r.end(), r);
    std::size_t k = static_cast<std::size_t>(it - c.r.begin());
    double u = (std::log(r) - std::log(c.r[k - 1])) / (std::log(c.r[k]) - std::log(c.r[k - 1]));
    return c.s[k - 1] + u * (c.s[k] - c.s[k - 1]);
}

// grid points strictly inside (a, b) plus both ends
std::vector<double> window(const Curve& c, double a, double b) {
    std::vector<double> w{a};
    for (double r : c.r)
        if (r > a && r < b) w.push_back(r);
    w.push_back(b);
    return w;
}

}  // namespace

IntegralValue O_integral(const SigmaEstimate& sig, double epsilon) {
    Curve c = ascending_confident(sig);
    if (c.r.empty() || c.r.front() > epsilon) throw std::invalid_argument("O_integral: no confident radii below eps");
    IntegralValue v;
    v.floor = c.r.front();
    v.lower_bound_only = c.dropped;  // the confidence floor cut the grid short
    std::vector<double> w = window(c, c.r.front(), epsilon);
    for (std::size_t k = 0; k + 1 < w.size(); ++k) {
        double u0 = std::log(w[k]), u1 = std::log(w[k + 1]);
        double g0 = -u0 * eval(c, w[k]), g1 = -u1 * eval(c, w[k + 1]);
        v.value += 0.5 * (g0 + g1) * (u1 - u0);
    }
    return v;
}

IntegralValue I_integral(const SigmaEstimate& sig, double epsilon, double R_prime) {
    if (!(R_prime > epsilon)) throw std::invalid_argument("I_integral: need R' > eps");
    Curve c = ascending_confident(sig);
    if (c.r.empty() || c.r.front() > epsilon || c.r.back() < R_prime)
        throw std::invalid_argument("I_integral: confident grid does not span [eps, R']");
    IntegralValue v;
    v.floor = epsilon;
    std::vector<double> w = window(c, epsilon, R_prime);
    for (std::size_t k = 0; k + 1 < w.size(); ++k) {
        double rm = std::sqrt(w[k] * w[k + 1]);
        v.value += std::log(1.0 / rm) / rm * (eval(c, w[k + 1]) - eval(c, w[k]));
    }
    double sum = 0.0;
    for (double a = epsilon; a < R_prime; a *= 2.0) {
        double b = std::min(2.0 * a, R_prime);
        sum += (eval(c, b) - eval(c, a)) / a;
    }
    v.dyadic = std::abs(std::log(epsilon)) * sum;
    return v;
}

UpperBoundReport upper_bound_report(double epsilon, double beta_norm, double I_val, double O_val,
                                    const BoundConstants& k) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("upper_bound_report: bad epsilon");
    UpperBoundReport r;
    r.epsilon = epsilon;
    r.beta_norm = beta_norm;
    r.I_val = I_val;
    r.O_val = O_val;
    const double L = std::abs(std::log(epsilon));
    r.bound_formula = 1.0 + k.C * (beta_norm * beta_norm * I_val + O_val);
    r.bound_hausTop = 1.0 + k.kappa * std::pow(L, 1.5) * std::sqrt(epsilon);
    r.bound_mis = 1.0 + k.Z * std::sqrt(epsilon) * L;
    return r;
}

std::vector<CeParameter> find_ce_parameters(double eps_lo, double eps_hi, int count, int grid,
                                            double threshold, int depth) {
    if (!(eps_lo > 0.0 && eps_hi > eps_lo) || count < 1 || grid < 2)
        throw std::invalid_argument("find_ce_parameters: bad arguments");
    std::vector<CeParameter> pass;
    for (int i = 0; i < grid; ++i) {
        double eps = i == 0          ? eps_lo
                     : i == grid - 1 ? eps_hi
                                     : std::exp(std::log(eps_lo) + (std::log(eps_hi) - std::log(eps_lo)) * i / (grid - 1));
        double c = -2.0 + eps;
        CeMargin m = ce_margin(critical_orbit(c, depth));
        if (m.margin > threshold) pass.push_back({c, eps, m.margin});
    }
    if (static_cast<int>(pass.size()) <= count) return pass;
    std::vector<CeParameter> out;
    for (int i = 0; i < count; ++i) {
        std::size_t k = count == 1 ? 0
                                   : static_cast<std::size_t>(std::llround(
                                         static_cast<double>(i) * (pass.size() - 1) / (count - 1)));
        out.push_back(pass[k]);
    }
    return out;
}

}  // namespace juliadim
