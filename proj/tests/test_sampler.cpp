#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "juliadim/sampler.hpp"

using namespace juliadim;

namespace {

// distance from w to the nearest cloud point, via a sort on the real part
struct Nearest {
    std::vector<cplx> pts;
    explicit Nearest(std::vector<cplx> p) : pts(std::move(p)) {
        std::sort(pts.begin(), pts.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    }
    double operator()(cplx w) const {
        auto it = std::lower_bound(pts.begin(), pts.end(), w.real(), [](cplx a, double x) { return a.real() < x; });
        double best = 1e300;
        for (auto j = it; j != pts.end() && j->real() - w.real() < best; ++j) best = std::min(best, std::abs(*j - w));
        for (auto j = it; j != pts.begin();) {
            --j;
            if (w.real() - j->real() >= best) break;
            best = std::min(best, std::abs(*j - w));
        }
        return best;
    }
};

}  // namespace

TEST_SUITE("sampler") {

TEST_CASE("unit circle for c = 0") {
    PointCloud pc = sample_inverse(make_parameter(0.0), 5000, 11);
    REQUIRE(pc.points.size() == 5000);
    for (cplx z : pc.points) CHECK(std::abs(std::abs(z) - 1.0) < 1e-9);
    CHECK(strip_extent(pc) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("segment for c = -2") {
    PointCloud pc = sample_inverse(make_parameter(-2.0), 5000, 5);
    for (cplx z : pc.points) {
        CHECK(std::abs(z.imag()) < 1e-9);
        CHECK(std::abs(z.real()) <= 2.0 + 1e-9);
    }
    CHECK(strip_extent(pc) < 1e-9);
}

TEST_CASE("strip and ellipse near the tip") {
    PointCloud pc = sample_inverse(make_parameter(-1.99), 20000, 2);
    double s = strip_extent(pc);
    CHECK(s <= std::sqrt(4.0 - 1.99 * 1.99) + 1e-9);
    CHECK(s <= 0.2 + 1e-9);
    CHECK(s >= 0.05);
    for (double c : {-2.0, -1.99, -1.5, -1.0, -0.5, 0.0}) {
        PointCloud q = sample_inverse(make_parameter(c), 4000, 9);
        for (cplx z : q.points) CHECK(std::abs(z - c) + std::abs(z + c) <= 4.0 + 1e-9);
    }
}

TEST_CASE("determinism and burn-in guard") {
    auto a = sample_inverse(make_parameter(cplx(-0.1, 0.1)), 1000, 42);
    auto b = sample_inverse(make_parameter(cplx(-0.1, 0.1)), 1000, 42);
    CHECK(a.points == b.points);
    auto d = sample_inverse(make_parameter(cplx(-0.1, 0.1)), 1000, 43);
    CHECK(a.points != d.points);
    CHECK_THROWS_AS(sample_inverse(make_parameter(0.0), 10, 1, 10), std::invalid_argument);
}

TEST_CASE("forward invariance residual") {
    for (cplx c : {cplx(0.0, 0.0), cplx(-0.1, 0.05), cplx(-1.0, 0.0)}) {
        PointCloud pc = sample_inverse(make_parameter(c), 100000, 3);
        Nearest nn(pc.points);
        double worst = 0.0;
        for (std::size_t i = 1; i < pc.points.size(); i += 97) worst = std::max(worst, nn(pc.points[i] * pc.points[i] + c));
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("interval cover base cases") {
    const double c = -2.5, p = (1.0 + std::sqrt(11.0)) / 2.0;
    IntervalCover c0 = interval_cover(make_parameter(c), 0);
    REQUIRE(c0.components.size() == 1);
    CHECK(c0.components[0].left == doctest::Approx(-p));
    CHECK(c0.components[0].right == doctest::Approx(p));

    IntervalCover c1 = interval_cover(make_parameter(c), 1);
    REQUIRE(c1.components.size() == 2);
    CHECK(c1.components[1].left == doctest::Approx(std::sqrt(-p - c)));
    CHECK(c1.components[1].right == doctest::Approx(std::sqrt(p - c)));
    CHECK(c1.components[0].left == doctest::Approx(-c1.components[1].right));
    // forward images are the two ends of [-p, p]
    for (const Interval& I : c1.components) {
        double a = I.left * I.left + c, b = I.right * I.right + c;
        CHECK(std::min(a, b) == doctest::Approx(-p));
        CHECK(std::max(a, b) == doctest::Approx(p));
    }
}

TEST_CASE("interval cover structure") {
    for (double c : {-2.01, -2.5, -4.0}) {
        double prev_total = 1e300;
        for (int n = 1; n <= 12; ++n) {
            IntervalCover cov = interval_cover(make_parameter(c), n);
            REQUIRE(cov.components.size() == (std::size_t(1) << n));
            IntervalCover up = interval_cover(make_parameter(c), n - 1);
            for (std::size_t i = 0; i < cov.components.size(); ++i) {
                const Interval& I = cov.components[i];
                CHECK(I.left < I.right);
                if (i > 0) CHECK(I.left > cov.components[i - 1].right);
                // f maps it onto some depth n-1 component
                double a = I.left * I.left + c, b = I.right * I.right + c;
                double lo = std::min(a, b), hi = std::max(a, b);
                bool hit = false;
                for (const Interval& J : up.components)
                    hit |= std::abs(J.left - lo) < 1e-10 && std::abs(J.right - hi) < 1e-10;
                CHECK(hit);
                CHECK(std::exp(I.log_length) == doctest::Approx(I.right - I.left).epsilon(1e-9));
            }
            CHECK(cov.total_length < prev_total);
            prev_total = cov.total_length;
        }
    }
}

TEST_CASE("length ratio approaches one near the tip") {
    const double eps = 0.01;
    for (int n = 10; n <= 20; n += 5) {
        double r = interval_cover(make_parameter(-2.0 - eps), n).total_length /
                   interval_cover(make_parameter(-2.0 - eps), n - 1).total_length;
        CHECK(r < 1.0);
        CHECK((1.0 - r) / std::sqrt(eps) > 0.1);
        CHECK((1.0 - r) / std::sqrt(eps) < 10.0);
    }
}

TEST_CASE("interval cover errors") {
    CHECK_THROWS_AS(interval_cover(make_parameter(-2.0), 3), std::invalid_argument);
    CHECK_THROWS_AS(interval_cover(make_parameter(-1.0), 3), std::invalid_argument);
    CHECK_THROWS_AS(interval_cover(make_parameter(-3.0), 41), std::invalid_argument);
    CHECK_THROWS_AS(interval_cover(make_parameter(-3.0), 30), std::length_error);
}

TEST_CASE("half cover agrees with the full cover") {
    auto half = half_cover_log_lengths(-2.3, 8);
    IntervalCover cov = interval_cover(make_parameter(-2.3), 8);
    std::vector<double> pos;
    for (const Interval& I : cov.components)
        if (I.left > 0) pos.push_back(I.log_length);
    std::sort(half.begin(), half.end());
    std::sort(pos.begin(), pos.end());
    REQUIRE(half.size() == pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) CHECK(half[i] == doctest::Approx(pos[i]).epsilon(1e-12));
}

}
