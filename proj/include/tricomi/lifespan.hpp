#pragma once

#include "tricomi/pde_solver.hpp"

#include <string>
#include <vector>

namespace tricomi::lifespan {

using pde::LifespanRecord;
using pde::ModelParams;
using pde::RunConfig;
using pde::RunResult;

struct ScanResult {
    std::vector<LifespanRecord> records; // in eps order
    bool monotone = true;                // T_blowup decreasing in eps over uncensored runs
    int censored = 0;
};

/// One independent run per eps. threads = 0 uses the hardware concurrency.
ScanResult lifespan_scan(const RunConfig& templ, const std::vector<double>& eps, int threads = 0);

/// Same, keeping every run's time series.
std::vector<RunResult> lifespan_runs(const RunConfig& templ, const std::vector<double>& eps, int threads = 0);

enum class FitMode { Subcritical, Critical };

const char* to_string(FitMode mode);
FitMode fit_mode_from_string(const std::string& name);

struct ScalingFit {
    FitMode mode = FitMode::Subcritical;
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; // root-mean-square residual
    double slope_stderr = 0.0;
    int used = 0;
    int excluded = 0;      // censored records
};

/// Least squares on (log eps, log T) or (log eps, log log T). Throws
/// FitError with fewer than 4 uncensored records.
ScalingFit fit_scaling(const std::vector<LifespanRecord>& records, FitMode mode);

/// eps^p (1+t)^{p/2} (1+phi(t))^{n-1-np/2}
double lp_envelope(const ModelParams& model, double t);

struct LowerBoundWindow {
    double eps = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double min_ratio = 0.0; // min of int|u|^p / lp_envelope over the window
    double max_ratio = 0.0;
    int points = 0;
};

/// Window [T0, T_end/2] with T_end the blow-up time (or t_end if censored).
LowerBoundWindow lp_lower_bound(const RunResult& run, const ModelParams& model, double T0);

struct SecondDifferenceCheck {
    double max_relative = 0.0; // max |G'' - int|u|^p| / int|u|^p
    int points = 0;
};

/// Nonuniform three-point second difference of G against int |u|^p, on
/// consecutive series rows with t < t_stop. Needs record_stride = 1.
SecondDifferenceCheck second_difference_check(const RunResult& run, double t_stop);

struct FrameCheck {
    double min_ratio_ball = 0.0;  // G / int_0^t int_0^tau |B(R+phi(s))|^{1-p} |G|^p
    double min_ratio_bare = 0.0; // same with (R+phi(s))^{-n(p-1)}
    int points = 0;
};

/// Evaluates the double integral from the measured G by trapezoid
/// quadrature on the series, for t in (0, t_stop].
FrameCheck frame_check(const RunResult& run, const ModelParams& model, double t_stop);

} // namespace tricomi::lifespan
