#pragma once

#include <vector>

#include "juliadim/quadratic.hpp"

namespace juliadim {

// Convex hull, counter-clockwise, no collinear points kept.
std::vector<cplx> convex_hull(std::vector<cplx> pts);

// Thinnest slab containing a convex polygon (rotating calipers). 0 for < 3 vertices.
double min_width(const std::vector<cplx>& hull);
double hull_diameter(const std::vector<cplx>& hull);

struct BetaValue {
    double beta = 0.0;
    std::size_t count = 0;
    bool empty = true;
};

BetaValue beta_at(const std::vector<cplx>& cloud, cplx x, double r);

inline constexpr std::size_t kAdmissibleFloor = 50;

struct BetaProfile {
    cplx base;
    double diam = 0.0;
    std::vector<double> scales;  // r_n = 2^-n diam, admissible ones only
    std::vector<double> betas;
    std::vector<std::size_t> counts;
};

BetaProfile beta_profile(const std::vector<cplx>& cloud, cplx x, int N,
                         std::size_t floor = kAdmissibleFloor);

double mean_wiggliness(const BetaProfile& profile, double r);

struct FlatnessFamily {
    std::vector<double> thresholds;  // increasing, last one is 1
    std::vector<double> densities;
};

void validate(const FlatnessFamily& f);
double almost_flat_bound(const FlatnessFamily& family, double C_prime);

// beta_j = C4 2^{j-1} sqrt(eps) capped at 1, d_j = min(1, 2^-j |log eps|^{3/2}).
FlatnessFamily ladder_family(double epsilon, double C4);

double good_scale_density(const BetaProfile& profile, double threshold);

}  // namespace juliadim
