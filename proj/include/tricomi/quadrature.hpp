#pragma once

#include <functional>
#include <span>

namespace tricomi::quad {

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0; // summed Gauss-Kronrod error estimates
    int panels = 0;
    bool converged = false;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b]. The panel with
/// the largest error estimate is bisected until the summed estimate drops
/// below max(abs_tol, rel_tol * |value|) or max_panels is reached.
/// Optional interior breakpoints seed the initial partition.
QuadResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                     double abs_tol = 0.0, int max_panels = 4000, std::span<const double> breakpoints = {});

} // namespace tricomi::quad
