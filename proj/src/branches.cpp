#include "juliadim/branches.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "juliadim/beta.hpp"

namespace juliadim {

std::string itinerary_string(const Itinerary& it) {
    std::string s;
    s.reserve(it.size());
    for (auto v : it) s.push_back(v > 0 ? '+' : (v < 0 ? '-' : '0'));
    return s;
}

Itinerary parse_itinerary(const std::string& s) {
    Itinerary it;
    it.reserve(s.size());
    for (char ch : s) {
        if (ch == '+') it.push_back(1);
        else if (ch == '-') it.push_back(-1);
        else if (ch == '0') it.push_back(0);
        else throw std::invalid_argument("bad itinerary character");
    }
    return it;
}

double pull_back(double c, const Itinerary& it, double y) {
    for (auto k = it.size(); k-- > 0;) {
        double r = std::sqrt(std::max(y - c, 0.0));
        y = it[k] < 0 ? -r : r;  // the central letter pulls back to the right half
    }
    return y;
}

cplx pull_back(double c, const Itinerary& it, cplx z, double* log_deriv) {
    double ld = 0.0;
    for (auto k = it.size(); k-- > 0;) {
        cplx r = std::sqrt(z - c);
        ld -= std::log(2.0 * std::abs(r));
        z = it[k] < 0 ? -r : r;
    }
    if (log_deriv) *log_deriv += ld;
    return z;
}

LogBounds pull_back_log_bounds(double c, const Itinerary& it, double a, double b) {
    double lo = 0.0, hi = 0.0;
    for (auto k = it.size(); k-- > 0;) {
        double ra = std::sqrt(std::max(a - c, 0.0)), rb = std::sqrt(std::max(b - c, 0.0));
        // |G'| = 1/(2 sqrt(y - c)) is decreasing in y
        hi -= std::log(2.0 * ra);
        lo -= std::log(2.0 * rb);
        if (it[k] < 0) {
            a = -rb;
            b = -ra;
        } else {
            a = ra;
            b = rb;
        }
    }
    return {lo, hi};
}

const char* target_name(Target t) {
    switch (t) {
        case Target::U: return "U";
        case Target::V: return "V";
        default: return "Z";
    }
}

Target parse_target(const std::string& s) {
    if (s == "U") return Target::U;
    if (s == "V") return Target::V;
    if (s == "Z") return Target::Z;
    throw std::invalid_argument("bad branch target: " + s);
}

int Branch::orientation() const {
    int o = 1;
    for (auto v : itin) o *= v < 0 ? -1 : 1;
    return o;
}

Branch compose(double c, const Branch& a, const Branch& b) {
    Branch r;
    double x = pull_back(c, a.itin, b.lo), y = pull_back(c, a.itin, b.hi);
    r.lo = std::min(x, y);
    r.hi = std::max(x, y);
    r.n = a.n + b.n;
    r.itin.reserve(a.itin.size() + b.itin.size());
    r.itin.insert(r.itin.end(), a.itin.begin(), a.itin.end());
    r.itin.insert(r.itin.end(), b.itin.begin(), b.itin.end());
    r.target = b.target;
    return r;
}

Box bounding_box(const Polygon& p) {
    Box b{p.at(0).real(), p[0].real(), p[0].imag(), p[0].imag()};
    for (const cplx& z : p) {
        b.x0 = std::min(b.x0, z.real());
        b.x1 = std::max(b.x1, z.real());
        b.y0 = std::min(b.y0, z.imag());
        b.y1 = std::max(b.y1, z.imag());
    }
    return b;
}

namespace {

double orient(cplx a, cplx b, cplx c) {
    return (b.real() - a.real()) * (c.imag() - a.imag()) -
           (b.imag() - a.imag()) * (c.real() - a.real());
}

bool segments_cross(cplx p1, cplx p2, cplx q1, cplx q2) {
    double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
    double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

bool inside(const Polygon& poly, cplx z) {
    bool in = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        cplx a = poly[i], b = poly[j];
        if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
            double x = a.real() + (z.imag() - a.imag()) * (b.real() - a.real()) /
                                      (b.imag() - a.imag());
            if (z.real() < x) in = !in;
        }
    }
    return in;
}

}  // namespace

bool polygons_intersect(const Polygon& a, const Polygon& b) {
    if (!bounding_box(a).overlaps(bounding_box(b))) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            if (segments_cross(a[i], a[(i + 1) % a.size()], b[j], b[(j + 1) % b.size()]))
                return true;
    return inside(a, b[0]) || inside(b, a[0]);
}

double polygon_diameter(const Polygon& p) { return hull_diameter(convex_hull(p)); }

Polygon circle_polygon(cplx center, double radius, int samples) {
    Polygon p(samples);
    for (int k = 0; k < samples; ++k) {
        double th = 2.0 * M_PI * k / samples;
        p[k] = center + radius * cplx(std::cos(th), std::sin(th));
    }
    return p;
}

}  // namespace juliadim
