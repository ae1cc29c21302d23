#pragma once

#include <cstdint>
#include <vector>

#include "juliadim/quadratic.hpp"

namespace juliadim {

struct PointCloud {
    std::vector<cplx> points;
    Parameter param;
    std::uint64_t seed = 0;
    std::size_t burn_in = 0;
    const char* method = "inverse-iteration";
};

// Backward orbit z <- +-sqrt(z - c) started at the fixed point p. One RNG bit per step.
PointCloud sample_inverse(const Parameter& param, std::size_t count, std::uint64_t seed,
                          std::size_t burn_in = 100);

double strip_extent(const PointCloud& cloud);

struct Interval {
    double left, right;
    double log_length;  // carried separately: right - left loses digits at depth
};

struct IntervalCover {
    int depth = 0;
    std::vector<Interval> components;  // sorted left to right
    double total_length = 0.0;
};

inline constexpr int kMaxCoverDepth = 26;

IntervalCover interval_cover(const Parameter& param, int n);

// Log-lengths of the 2^(n-1) depth-n components inside (0, p]. The cover is
// symmetric, so this is all the exterior dimension needs.
std::vector<double> half_cover_log_lengths(double c, int n);

}  // namespace juliadim
