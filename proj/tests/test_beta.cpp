#include <cmath>
#include <random>

#include "doctest.h"
#include "juliadim/beta.hpp"
#include "juliadim/sampler.hpp"
#include "oracles.hpp"

using namespace juliadim;

namespace {

std::vector<cplx> random_cloud(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> s(0.1, 1.0);
    double sx = s(rng), sy = s(rng);
    std::vector<cplx> pts;
    for (int i = 0; i < n; ++i) pts.emplace_back(sx * g(rng), sy * g(rng));
    return pts;
}

BetaProfile synthetic_profile(int N, double diam) {
    BetaProfile p;
    p.diam = diam;
    for (int n = 0; n <= N; ++n) {
        double r = std::ldexp(diam, -n);
        p.scales.push_back(r);
        p.betas.push_back(r / 4.0);
        p.counts.push_back(1000);
    }
    return p;
}

}  // namespace

TEST_SUITE("beta") {

TEST_CASE("collinear and tiny sets are flat") {
    std::vector<cplx> line;
    for (int i = 0; i < 50; ++i) line.emplace_back(0.1 * i, 0.05 * i);
    CHECK(beta_at(line, line[10], 1.0).beta < 1e-12);
    std::vector<cplx> two{{0, 0}, {1, 1}};
    BetaValue b = beta_at(two, 0.0, 5.0);
    CHECK(b.beta == 0.0);
    CHECK(b.count == 2);
    BetaValue e = beta_at(two, cplx(10, 10), 0.5);
    CHECK(e.empty);
    CHECK(e.beta == 0.0);
    CHECK_THROWS_AS(beta_at(two, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("two parallel segments") {
    std::vector<cplx> pts;
    for (int i = 0; i <= 80; ++i) {
        double x = -0.4 + 0.01 * i;
        pts.emplace_back(x, 0.05);
        pts.emplace_back(x, -0.05);
    }
    CHECK(beta_at(pts, 0.0, 0.5).beta == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("calipers match brute force on random clouds") {
    std::mt19937_64 rng(1);
    for (int k = 0; k < 50; ++k) {
        auto pts = random_cloud(rng, 100);
        double r = 10.0;  // whole cloud
        CHECK(beta_at(pts, 0.0, r).beta == doctest::Approx(oracle::beta_brute(pts, 0.0, r)).epsilon(1e-6));
        double r2 = 0.8;
        CHECK(std::abs(beta_at(pts, pts[0], r2).beta - oracle::beta_brute(pts, pts[0], r2)) < 1e-6);
    }
}

TEST_CASE("hull and diameter") {
    std::vector<cplx> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.5, 0}};
    auto h = convex_hull(sq);
    CHECK(h.size() == 4);
    CHECK(min_width(h) == doctest::Approx(1.0));
    CHECK(hull_diameter(h) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("beta stays in [0, 1] and is similarity invariant") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 30; ++k) {
        auto pts = random_cloud(rng, 200);
        cplx x = pts[k];
        double r = 0.3 + u(rng);
        double b = beta_at(pts, x, r).beta;
        CHECK(b >= 0.0);
        CHECK(b <= 1.0);
        cplx rot = std::polar(0.5 + 2.0 * u(rng), 2.0 * oracle::kPi * u(rng));
        cplx shift(u(rng) * 10 - 5, u(rng) * 10 - 5);
        std::vector<cplx> moved;
        for (cplx z : pts) moved.push_back(rot * z + shift);
        double b2 = beta_at(moved, rot * x + shift, std::abs(rot) * r).beta;
        CHECK(std::abs(b - b2) < 1e-9);
    }
}

TEST_CASE("subset monotonicity") {
    std::mt19937_64 rng(8);
    for (int k = 0; k < 20; ++k) {
        auto pts = random_cloud(rng, 300);
        std::vector<cplx> sub(pts.begin(), pts.begin() + 150);
        CHECK(beta_at(sub, 0.0, 1.0).beta <= beta_at(pts, 0.0, 1.0).beta + 1e-12);
    }
}

TEST_CASE("circle cloud gives r/4") {
    PointCloud pc = sample_inverse(make_parameter(0.0), 100000, 17);
    cplx x = pc.points[123];
    x /= std::abs(x);
    CHECK(beta_at(pc.points, x, 0.2).beta == doctest::Approx(0.05).epsilon(0.1));
    // the brute force is cubic in the ball size, so compare on a subsample
    std::vector<cplx> sub(pc.points.begin(), pc.points.begin() + 5000);
    CHECK(beta_at(sub, x, 0.2).beta == doctest::Approx(oracle::beta_brute(sub, x, 0.2, 2000)).epsilon(1e-6));

    BetaProfile prof = beta_profile(pc.points, x, 12);
    REQUIRE(prof.betas.size() >= 6);
    CHECK(prof.diam == doctest::Approx(2.0).epsilon(1e-3));
    // beta halves per scale below the top ones
    std::vector<double> ns, bs;
    for (std::size_t i = 2; i < prof.betas.size(); ++i) {
        ns.push_back(prof.scales[i]);
        bs.push_back(prof.betas[i]);
        CHECK(prof.betas[i] == doctest::Approx(prof.scales[i] / 4.0).epsilon(0.1));
    }
    CHECK(oracle::loglog_slope(ns, bs) == doctest::Approx(1.0).epsilon(0.05));
    for (std::size_t c : prof.counts) CHECK(c >= kAdmissibleFloor);
}

TEST_CASE("segment cloud is flat at every scale") {
    PointCloud pc = sample_inverse(make_parameter(-2.0), 20000, 3);
    BetaProfile prof = beta_profile(pc.points, pc.points[7], 12);
    REQUIRE_FALSE(prof.betas.empty());
    for (double b : prof.betas) CHECK(b <= 1e-6);
    CHECK(good_scale_density(prof, 0.01) == 1.0);
}

TEST_CASE("tip cloud top scale is of order sqrt(eps)") {
    PointCloud pc = sample_inverse(make_parameter(-1.99), 20000, 4);
    BetaProfile prof = beta_profile(pc.points, 0.0, 10);
    REQUIRE_FALSE(prof.betas.empty());
    CHECK(prof.betas[0] <= 4.0 * 0.1);
    CHECK(prof.betas[0] >= 0.1 / 10.0);
    double g = good_scale_density(prof, 2.0 * std::sqrt(0.01));
    CHECK(g >= 0.0);
    CHECK(g <= 1.0);
}

TEST_CASE("scaling inequality between adjacent dyadic scales") {
    for (double c : {0.0, -1.99, -1.999, -1.0}) {
        PointCloud pc = sample_inverse(make_parameter(c), 20000, 6);
        for (int k = 0; k < 5; ++k) {
            BetaProfile prof = beta_profile(pc.points, pc.points[1000 * k], 12);
            for (std::size_t i = 1; i < prof.betas.size(); ++i)
                CHECK(prof.betas[i] <= 1.05 * (prof.scales[i - 1] / prof.scales[i]) * prof.betas[i - 1] + 1e-15);
        }
    }
}

TEST_CASE("profile truncates below the admissibility floor") {
    std::vector<cplx> pts;
    for (int i = 0; i < 200; ++i) pts.emplace_back(std::cos(0.0314 * i), std::sin(0.0314 * i));
    BetaProfile prof = beta_profile(pts, pts[0], 20);
    REQUIRE_FALSE(prof.counts.empty());
    CHECK(prof.counts.back() >= kAdmissibleFloor);
    CHECK(prof.scales.size() < 21);
    CHECK_THROWS_AS(beta_profile(pts, pts[0], 0), std::invalid_argument);
}

TEST_CASE("mean wiggliness") {
    BetaProfile zero = synthetic_profile(10, 1.0);
    for (double& b : zero.betas) b = 0.0;
    CHECK(mean_wiggliness(zero, std::ldexp(1.0, -10)) == 0.0);

    BetaProfile flat = synthetic_profile(40, 1.0);
    for (double& b : flat.betas) b = 0.3;
    // (n+1) log 2 b^2 / (n log 2) -> b^2
    CHECK(mean_wiggliness(flat, std::ldexp(1.0, -40)) == doctest::Approx(0.09 * 41.0 / 40.0));

    BetaProfile circ = synthetic_profile(20, 1.0);
    double sum = 0.0;
    for (int n = 0; n <= 20; ++n) sum += std::pow(std::ldexp(1.0, -n) / 4.0, 2);
    double expect = sum * std::log(2.0) / (20.0 * std::log(2.0));
    CHECK(mean_wiggliness(circ, std::ldexp(1.0, -20)) == doctest::Approx(expect));
    CHECK(expect < 1.0 / 20.0);
    CHECK_THROWS_AS(mean_wiggliness(circ, 2.0), std::invalid_argument);
}

TEST_CASE("good scale density on the circle ladder") {
    BetaProfile circ = synthetic_profile(20, 1.0);
    circ.scales.erase(circ.scales.begin());
    circ.betas.erase(circ.betas.begin());
    int good = 0;
    for (int n = 1; n <= 20; ++n) good += std::ldexp(1.0, -n) / 4.0 <= 0.01;
    CHECK(good_scale_density(circ, 0.01) == doctest::Approx(good / 20.0));
    CHECK(good_scale_density(circ, 0.01) == doctest::Approx((20.0 - std::log2(25.0)) / 20.0).epsilon(0.05));
    CHECK_THROWS_AS(good_scale_density(circ, 0.0), std::invalid_argument);
}

TEST_CASE("almost flat bound") {
    FlatnessFamily f{{0.5, 1.0}, {0.0, 0.0}};
    CHECK(almost_flat_bound(f, 3.0) == 1.0);
    CHECK(almost_flat_bound(FlatnessFamily{{1.0}, {1.0}}, 1.0) == 2.0);
    CHECK_THROWS_AS(almost_flat_bound(FlatnessFamily{{0.5, 0.4}, {0, 0}}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(almost_flat_bound(FlatnessFamily{{0.5}, {0.1}}, 1.0), std::invalid_argument);

    // the ladder bound is 1 + O(sqrt(eps) |log eps|^{3/2})
    for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
        FlatnessFamily lad = ladder_family(eps, 1.0);
        validate(lad);
        double excess = almost_flat_bound(lad, 1.0) - 1.0;
        double scale = std::sqrt(eps) * std::pow(std::abs(std::log(eps)), 1.5);
        CHECK(excess > 0.0);
        CHECK(excess / scale < 10.0);
        CHECK(excess / scale > 0.01);
    }
}

}
