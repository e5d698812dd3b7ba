#pragma once

#include "tricomi/testfun.hpp"

#include <memory>
#include <string>
#include <vector>

// Radial finite-volume solver for u_tt - t^m Lap u = |u|^p with data
// (eps u0, eps u1) supported in |x| <= R. n = 1 uses the even half line.

namespace tricomi::pde {

struct ModelParams {
    double m = 1.0;
    int n = 1;
    double p = 2.0;
    double R = 1.0;
    double eps = 1.0;
};

enum class Profile {
    Bump4,  // (1 - (r/R)^2)^4
    Smooth, // exp(1 - 1/(1 - (r/R)^2))
};

const char* to_string(Profile profile);
Profile profile_from_string(const std::string& name);

/// Unit-amplitude profile at radius r, zero for r >= R.
double profile_value(Profile profile, double r, double R);

struct RunConfig {
    ModelParams model;
    double dx = 2e-3;
    double domain_radius = 0.0; // 0 selects R + phi(t_max) + margin
    double t_max = 50.0;
    double cfl = 0.5;
    double blowup_threshold = 1e8;
    double confirm_threshold = 1e6;
    Profile profile = Profile::Bump4;
    double u1_scale = 1.0; // u1 = u1_scale * u0
    bool nonlinear = true; // false drops |u|^p
    /// support = {|u| > support_tol * max|u|}; 0 selects dx^2, the scheme's
    /// truncation level, below which leapfrog precursors run ahead of the cone.
    double support_tol = 0.0;
    double f_interval = 0.0;   // time between F samples, 0 disables F
    double q = 0.0;            // test-function exponent for F
    bool q_auto = true;        // q = (n-1)/2 - 1/p
    double lambda0 = 0.5;
    int record_stride = 1;

    testfun::TestFnParams test_function() const;
};

/// Throws ConfigError for an invalid configuration.
void validate(const RunConfig& cfg);

double resolved_domain_radius(const RunConfig& cfg);
double resolved_support_tol(const RunConfig& cfg);

struct Grid {
    int n = 1;
    double dx = 0.0;
    std::vector<double> r;      // node radii i dx
    std::vector<double> volume; // int r^{n-1} dr over the cell around r_i
    std::vector<double> c_plus; // face area over (dx * volume)
    std::vector<double> c_minus;
    double sphere = 2.0;        // |S^{n-1}|
    /// 2 / sqrt(spectral radius of the Laplacian): the leapfrog limit on
    /// speed * dt. About dx for n = 1; the origin cell lowers it for n >= 2.
    double stable_dx = 0.0;
};

struct SolverState {
    std::shared_ptr<const Grid> grid;
    std::vector<double> u;
    std::vector<double> u_prev;
    double t = 0.0;
    double dt = 0.0; // size of the step that produced u
    long step = 0;
    int active = 0;  // nodes >= active are zero at both time levels
    double max_abs = 0.0;
    bool nonfinite = false;
};

SolverState initialize(const RunConfig& cfg);

/// Step size for the next step from state.t.
double next_dt(const SolverState& state, const RunConfig& cfg);

/// Advances by next_dt (clipped to t_max). The first call performs the
/// Taylor start from t = 0.
void step(SolverState& state, const RunConfig& cfg);

double functional_G(const SolverState& state);
double functional_Lp(const SolverState& state, double p);

/// F(t) = int u(x,t) eta_q(x,t,t) dx. nodes > 0 evaluates eta_q on that many
/// radii and interpolates; nodes = 0 evaluates it at every nonzero cell.
double functional_F(const SolverState& state, const testfun::TestFnParams& tf, int nodes = 0);

/// Largest radius where |u| exceeds rel_tol * max|u|; 0 for the zero field.
double support_radius(const SolverState& state, double rel_tol);

struct SeriesRow {
    double t = 0.0;
    double max_u = 0.0;
    double G = 0.0;
    double F = 0.0; // NaN where not sampled
    double support = 0.0;
    double Lp = 0.0;
};

struct LifespanRecord {
    double eps = 0.0;
    double T_blowup = 0.0;   // first crossing of blowup_threshold; NaN when censored
    double T_confirm = 0.0;  // first crossing of confirm_threshold; NaN if none
    bool censored = true;
    bool threshold_consistent = false; // |T_blowup / T_confirm - 1| <= 2%
    double peak = 0.0;
    double t_end = 0.0;
    long steps = 0;
};

struct RunResult {
    LifespanRecord record;
    std::vector<SeriesRow> series;
    double max_support_excess = 0.0; // max over steps of support - (R + phi(t))
    double dx = 0.0;
};

RunResult run_until_blowup(const RunConfig& cfg);

} // namespace tricomi::pde
