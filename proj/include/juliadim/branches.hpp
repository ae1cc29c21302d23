#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "juliadim/quadratic.hpp"

namespace juliadim {

// Signs s_0 .. s_{n-1} of f^k(x) along a branch. s_0 = 0 marks the even central branch.
using Itinerary = std::vector<std::int8_t>;

std::string itinerary_string(const Itinerary& it);
Itinerary parse_itinerary(const std::string& s);

// G_it(y): the point x with sign pattern `it` and f^n(x) = y. Innermost letter first.
double pull_back(double c, const Itinerary& it, double y);

// Same, on a complex point with principal square roots. Adds log|G'(z)| to *log_deriv.
cplx pull_back(double c, const Itinerary& it, cplx z, double* log_deriv);

// Interval bounds on log|G'| over y in [a, b]. Each step is monotone, so the
// per-step extremes sit at the interval ends.
struct LogBounds {
    double lo, hi;
};
LogBounds pull_back_log_bounds(double c, const Itinerary& it, double a, double b);

enum class Target { U, V, Z };
const char* target_name(Target t);
Target parse_target(const std::string& s);

struct Branch {
    double lo = 0.0, hi = 0.0;  // domain
    int n = 0;                  // iterate count
    Itinerary itin;
    Target target = Target::U;
    double log_inf = 0.0, log_sup = 0.0;  // log|phi'| over the domain

    double length() const { return hi - lo; }
    int orientation() const;
};

// Branch `a` followed by `b`: domain G_a(dom b), word a.itin + b.itin.
// `a` must be monotone (no central letter).
Branch compose(double c, const Branch& a, const Branch& b);

// Simple closed polygons used for complex branch domains.
using Polygon = std::vector<cplx>;

struct Box {
    double x0, x1, y0, y1;
    bool overlaps(const Box& o) const {
        return x0 <= o.x1 && o.x0 <= x1 && y0 <= o.y1 && o.y0 <= y1;
    }
};

Box bounding_box(const Polygon& p);
bool polygons_intersect(const Polygon& a, const Polygon& b);
double polygon_diameter(const Polygon& p);
Polygon circle_polygon(cplx center, double radius, int samples);

}  // namespace juliadim
