#include "tricomi/stats.hpp"

#include "tricomi/errors.hpp"

#include <cmath>
#include <string>

namespace tricomi::stats {

LineFit ols(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size()) {
        throw FitError("ols: abscissa and ordinate lengths differ");
    }
    const int n = static_cast<int>(x.size());
    if (n < 2) {
        throw FitError("ols: need at least two points, got " + std::to_string(n));
    }
    double mx = 0.0;
    double my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) {
        throw FitError("ols: all abscissae coincide");
    }
    LineFit fit;
    fit.count = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = y[i] - fit.intercept - fit.slope * x[i];
        sse += r * r;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    fit.slope_stderr = n > 2 ? std::sqrt(sse / (n - 2) / sxx) : 0.0;
    return fit;
}

} // namespace tricomi::stats
