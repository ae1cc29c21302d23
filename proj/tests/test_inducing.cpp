#include <cmath>
#include <random>

#include "doctest.h"
#include "juliadim/inducing.hpp"

using namespace juliadim;

namespace {

double forward(double c, double x, int n) {
    for (int k = 0; k < n; ++k) x = x * x + c;
    return x;
}

bool in_open(double x, double a, double b) { return x > a && x < b; }

}  // namespace

TEST_SUITE("branches") {

TEST_CASE("itinerary text round trip") {
    Itinerary it = parse_itinerary("+-0+");
    CHECK(it == Itinerary{1, -1, 0, 1});
    CHECK(itinerary_string(it) == "+-0+");
    CHECK_THROWS_AS(parse_itinerary("+x"), std::invalid_argument);
    CHECK(parse_target("V") == Target::V);
    CHECK(std::string(target_name(Target::Z)) == "Z");
}

TEST_CASE("pull back inverts forward iteration") {
    const double c = -1.99;
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> bit(0, 1);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (int k = 0; k < 200; ++k) {
        Itinerary it(1 + k % 6);
        for (auto& s : it) s = bit(rng) ? 1 : -1;
        double y = u(rng);
        double x = pull_back(c, it, y);
        CHECK(forward(c, x, static_cast<int>(it.size())) == doctest::Approx(y).epsilon(1e-9));
        // signs along the orbit follow the word
        double z = x;
        for (auto s : it) {
            CHECK((z >= 0.0) == (s > 0));
            z = z * z + c;
        }
        double ld = 0.0;
        cplx w = pull_back(c, it, cplx(y, 0.0), &ld);
        CHECK(std::abs(w - x) < 1e-12);
        // derivative against a central difference
        double h = 1e-7;
        double fd = (pull_back(c, it, y + h) - pull_back(c, it, y - h)) / (2 * h);
        CHECK(std::exp(ld) == doctest::Approx(std::abs(fd)).epsilon(1e-5));
        LogBounds lb = pull_back_log_bounds(c, it, y - 0.05, y + 0.05);
        CHECK(lb.lo <= ld + 1e-12);
        CHECK(ld <= lb.hi + 1e-12);
    }
}

TEST_CASE("composition adds iterates") {
    const double c = -1.99;
    Branch a;
    a.itin = {1, -1};
    a.n = 2;
    a.lo = pull_back(c, a.itin, -0.5);
    a.hi = pull_back(c, a.itin, 0.5);
    if (a.lo > a.hi) std::swap(a.lo, a.hi);
    Branch b;
    b.itin = {-1};
    b.n = 1;
    b.lo = -0.3;
    b.hi = -0.2;
    Branch ab = compose(c, a, b);
    CHECK(ab.n == 3);
    CHECK(ab.itin == Itinerary{1, -1, -1});
    double e1 = pull_back(c, a.itin, b.lo), e2 = pull_back(c, a.itin, b.hi);
    CHECK(ab.lo == doctest::Approx(std::min(e1, e2)));
    CHECK(ab.hi == doctest::Approx(std::max(e1, e2)));
}

TEST_CASE("polygons") {
    Polygon a = circle_polygon(0.0, 1.0, 64), b = circle_polygon(cplx(2.5, 0), 1.0, 64),
            d = circle_polygon(cplx(1.5, 0), 1.0, 64);
    CHECK_FALSE(polygons_intersect(a, b));
    CHECK(polygons_intersect(a, d));
    CHECK(polygon_diameter(a) == doctest::Approx(2.0).epsilon(1e-3));
    Box bx = bounding_box(a);
    CHECK(bx.x0 == doctest::Approx(-1.0).epsilon(1e-3));
}

}

TEST_SUITE("inducing") {

TEST_CASE("fundamental interval near the tip") {
    const double eps = 1e-4;
    BoxMapping box = first_return_map(-2.0 + eps);
    CHECK(box.q == doctest::Approx((1.0 - std::sqrt(9.0 - 4.0 * eps)) / 2.0));
    CHECK(box.q == doctest::Approx(-1.0 + eps / 3.0).epsilon(1e-8));
    CHECK(box.Ulen() == doctest::Approx(2.0).epsilon(1e-3));
    // the two n = 2 components sit against q and -q
    int gaps = 0;
    for (const Branch& b : box.branches)
        if (b.n == 2) {
            ++gaps;
            CHECK((std::abs(b.lo - box.q) < 1e-12 || std::abs(b.hi + box.q) < 1e-12));
        }
    CHECK(gaps == 2);
    CHECK(box.has_central);
    CHECK(box.central.itin[0] == 0);
    CHECK(box.central.lo == doctest::Approx(-box.central.hi));
}

TEST_CASE("first return property on random points") {
    for (double eps : {1e-2, 1e-3}) {
        const double c = -2.0 + eps;
        BoxMapping box = first_return_map(c);
        const double q = box.q;
        std::mt19937_64 rng(static_cast<unsigned>(1 / eps));
        std::uniform_real_distribution<double> u(0.02, 0.98);
        std::vector<Branch> all = box.branches;
        if (box.has_central) all.push_back(box.central);
        for (const Branch& b : all) {
            int bad = 0;
            for (int k = 0; k < 1000; ++k) {
                double x = b.lo + u(rng) * b.length();
                double y = x;
                for (int j = 1; j < b.n; ++j) {
                    y = y * y + c;
                    bad += in_open(y, q, -q);
                }
                y = y * y + c;
                bad += !in_open(y, q, -q);
            }
            CHECK_MESSAGE(bad == 0, "branch n = " << b.n);
        }
        // branches are disjoint; neighbours may share an endpoint up to rounding
        for (std::size_t i = 1; i < box.branches.size(); ++i)
            CHECK(box.branches[i].lo >= box.branches[i - 1].hi - 1e-12);
        CHECK(box.z_over_sqrt_eps > 0.0);
        CHECK(box.z_over_sqrt_eps < 20.0);
        CHECK(box.min_log_inf_off_Z >= std::log(3.0) - 1e-12);
    }
}

TEST_CASE("V and its regular boundary") {
    double prev_ratio = 0.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        BoxMapping box = first_return_map(-2.0 + eps);
        make_V(box);
        CHECK(box.Vlo > box.q);
        CHECK(box.Vhi < -box.q);
        CHECK(box.Vlen() < box.Ulen());
        CHECK(boundary_regular(box, 1000));
        double ratio = box.Vlen() / box.Ulen();
        CHECK(ratio > prev_ratio);
        prev_ratio = ratio;
    }
    BoxMapping far = first_return_map(-1.8);
    if (far.branches.end() == std::find_if(far.branches.begin(), far.branches.end(), [](const Branch& b) { return b.n == 2; }))
        CHECK_THROWS_AS(make_V(far), std::invalid_argument);
    CHECK_THROWS_AS(first_return_map(-2.0), std::invalid_argument);
    CHECK_THROWS_AS(first_return_map(-1.5), std::invalid_argument);
}

TEST_CASE("first entry to V") {
    BoxMapping box = first_return_map(-2.0 + 1e-3);
    make_V(box);
    double lost = 0.0;
    auto hV = first_entry_V(box, 1e-9, &lost);
    double total = lost;
    for (const Branch& b : hV) {
        total += b.length();
        CHECK(b.target == Target::V);
        double m = 0.5 * (b.lo + b.hi);
        double y = forward(box.c, m, b.n);
        CHECK(in_open(y, box.Vlo, box.Vhi));
    }
    CHECK(total == doctest::Approx(box.Ulen()).epsilon(1e-6));
}

TEST_CASE("postcritical filling contracts") {
    double prev = -1.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        BoxMapping box = first_return_map(-2.0 + eps);
        make_V(box);
        FillingResult f = postcritical_filling(box);
        CHECK(f.contraction_ok);
        CHECK_FALSE(f.cap_exceeded);
        for (std::size_t j = 0; j < f.sizes.size(); ++j) CHECK(f.sizes[j] < std::pow(3.0, -static_cast<double>(j)));
        double s = f.short_length / std::sqrt(eps);
        CHECK(s < 50.0);
        prev = s;
    }
    CHECK(prev > 0.0);

    // nothing to do when the critical value avoids long domains
    BoxMapping box = first_return_map(-2.0 + 1e-2);
    box.has_central = false;
    FillingResult f = postcritical_filling(box);
    CHECK(f.sizes.empty());
}

TEST_CASE("assembled repellers pass every check") {
    std::vector<double> Cs, ms, dist;
    for (double eps : {1e-2, 3e-3, 1e-3}) {
        CantorRepeller rep = build_repeller(-2.0 + eps);
        RepellerCheck ck = check_repeller(rep);
        CHECK_MESSAGE(ck.ok(), ck.first_failure);
        CHECK(ck.min_inf_deriv >= 2.0);
        CHECK(ck.diam_W_over_sqrt_eps >= 1e-2);
        CHECK(ck.diam_W_over_sqrt_eps <= 1e2);
        CHECK(ck.tail_slope < 1.0);
        CHECK(rep.coverage >= rep.Vlen() * (1.0 - rep.C1 * std::pow(eps, 0.75)) * (1 - 1e-12));
        CHECK(rep.has_W);
        CHECK(rep.W.Jlo > -rep.p);
        CHECK(rep.W.Jhi < rep.c);
        CHECK(rep.W.im_lo > 0.0);
        Cs.push_back(ck.measured_C);
        ms.push_back(rep.W.m - std::abs(std::log(eps)) / std::log(4.0));
        dist.push_back(ck.max_distortion);
        // every real branch lands in V
        for (const Branch& b : rep.branches) {
            CHECK(b.target == Target::V);
            CHECK(in_open(forward(rep.c, 0.5 * (b.lo + b.hi), b.n), rep.Vlo, rep.Vhi));
            CHECK(pull_back(rep.c, b.itin, rep.Vlo) == doctest::Approx(b.orientation() > 0 ? b.lo : b.hi).epsilon(1e-10));
        }
    }
    CHECK(*std::max_element(Cs.begin(), Cs.end()) <= 4.0 * *std::min_element(Cs.begin(), Cs.end()));
    CHECK(*std::max_element(ms.begin(), ms.end()) - *std::min_element(ms.begin(), ms.end()) < 3.0);
    CHECK(*std::max_element(dist.begin(), dist.end()) <= 4.0 * *std::min_element(dist.begin(), dist.end()));
}

TEST_CASE("repeller JSON round trip") {
    CantorRepeller rep = build_repeller(-2.0 + 1e-2);
    std::string js = repeller_to_json(rep);
    CantorRepeller back = repeller_from_json(js);
    CHECK(repeller_to_json(back) == js);
    CHECK(back.branches.size() == rep.branches.size());
    CHECK(check_repeller(back).ok());
    CHECK_THROWS(repeller_from_json("{\"c\": 1}"));
}

TEST_CASE("tail histogram") {
    CantorRepeller one;
    Branch b;
    b.log_inf = 1.3;
    one.branches.push_back(b);
    TailHistogram h = branch_tail_histogram(one);
    REQUIRE(h.counts.size() == 1);
    CHECK(h.counts[0] == 1);
    CHECK(h.first_bin == 1);

    CantorRepeller two = one;
    b.log_inf = 2.2;
    two.branches.push_back(b);
    h = branch_tail_histogram(two);
    CHECK(h.counts == std::vector<long>{1, 1});
}

}
