#pragma once

#include <string>
#include <vector>

// Test functions xi_q, eta_q built from the two-point solutions, and an
// empirical check of their power-law envelopes.

namespace tricomi::testfun {

struct TestFnParams {
    double q = 0.0;
    double lambda0 = 0.5; // upper limit of the lambda integral
    double R = 1.0;       // support radius of the data
    int n = 3;
    double m = 1.0;
};

/// <s> = 3 + |s|
inline double bracket(double s)
{
    return 3.0 + (s < 0.0 ? -s : s);
}

struct Quadrature {
    double value = 0.0;
    double abs_error = 0.0;
};

/// int_0^lambda0 e^{-lambda(phi(t)+R)} Phi1(t,s;lambda) varphi(lambda|x|) lambda^q d lambda
Quadrature xi_q_eval(double x_norm, double t, double s, const TestFnParams& p, double rel_tol = 1e-10);

/// Same with Phi2(t,s;lambda)/(t-s); at s = t the kernel is 1.
Quadrature eta_q_eval(double x_norm, double t, double s, const TestFnParams& p, double rel_tol = 1e-10);

inline double xi_q(double x_norm, double t, double s, const TestFnParams& p)
{
    return xi_q_eval(x_norm, t, s, p).value;
}

inline double eta_q(double x_norm, double t, double s, const TestFnParams& p)
{
    return eta_q_eval(x_norm, t, s, p).value;
}

// ------------------------------------------------------------------ envelopes

enum class Part { XiLower, EtaLower, EtaSlice, EtaDiagonal };

/// "i", "i-eta", "ii", "iii"
const char* to_string(Part part);
Part part_from_string(const std::string& name);

/// Envelope the bound compares against, without its constant.
double envelope(Part part, double x_norm, double t, double s, const TestFnParams& p);

/// Whether (t, s, x) satisfies the part's hypothesis.
bool admissible(Part part, double x_norm, double t, double s, const TestFnParams& p);

struct GridSpec {
    double t_min = 0.0;   // 0 is included as its own point
    double t_max = 1e3;
    int t_points = 13;    // log-spaced in [t_first, t_max] plus t = 0 when t_min = 0
    double t_first = 1e-2;
    int x_points = 3;     // fractions of each part's radius bound, 0 .. 1
    int s_points = 4;     // part (ii): s = fraction * t, fractions in [0, 0.9]

    /// 2x refinement of every axis.
    GridSpec refined() const;
};

struct BoundRow {
    Part part = Part::XiLower;
    double t = 0.0;
    double s = 0.0;
    double x_norm = 0.0;
    double value = 0.0;
    double envelope = 0.0;
    double ratio = 0.0;
};

struct PartSummary {
    Part part = Part::XiLower;
    bool lower = true;    // inf of ratio for lower bounds, sup for upper
    double constant = 0.0;
    int points = 0;
    int excluded = 0;
    bool ok = false;      // positive inf / finite sup
};

struct BoundReport {
    TestFnParams params;
    std::vector<BoundRow> rows;
    std::vector<PartSummary> parts;

    const PartSummary& summary(Part part) const;
};

/// Evaluates every requested part on the grid. Explicit points may be passed
/// instead of a GridSpec to check an arbitrary list.
BoundReport envelope_report(const TestFnParams& p, const GridSpec& grid, const std::vector<Part>& parts);

struct GridPoint {
    double t = 0.0;
    double s = 0.0;
    double x_norm = 0.0;
};

BoundReport envelope_report(const TestFnParams& p, const std::vector<GridPoint>& points, const std::vector<Part>& parts);

struct StabilityCheck {
    PartSummary coarse;
    PartSummary fine;
    double relative_change = 0.0;
    bool stable = false; // relative_change < tol
};

/// Runs the part on grid and grid.refined() and compares the constants.
StabilityCheck refinement_check(const TestFnParams& p, const GridSpec& grid, Part part, double tol = 0.1);

} // namespace tricomi::testfun
