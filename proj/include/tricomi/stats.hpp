#pragma once

#include <vector>

namespace tricomi::stats {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r_squared = 0.0;
    int count = 0;
};

/// Ordinary least squares y = intercept + slope x. Throws FitError for
/// fewer than two points or a degenerate abscissa.
LineFit ols(const std::vector<double>& x, const std::vector<double>& y);

} // namespace tricomi::stats
