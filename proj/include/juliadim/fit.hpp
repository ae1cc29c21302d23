#pragma once

#include <cstddef>
#include <vector>

namespace juliadim {

struct FitResult {
    double slope = 0.0, intercept = 0.0, r_squared = 0.0;
    std::size_t n_points = 0;
    double residual_max = 0.0;
    bool flagged = false;  // fewer than 4 points
};

// Least squares of log y on log x. Throws on nonpositive input or fewer than 2 points.
FitResult fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace juliadim
