#pragma once

#include "tricomi/exponents.hpp"

#include <vector>

// Iteration engines behind the lifespan upper bounds. Every constant that
// the blow-up argument only proves to exist (C0, C2, B1, the frame constant)
// is an input; the scaling laws extracted below do not depend on them.
// All sequence arithmetic is carried out on logarithms.

namespace tricomi::iteration {

using exponents::ExponentContext;

inline constexpr int kMaxIterations = 60;

// ---------------------------------------------------------------- subcritical

/// Lower bounds G(t) > D_j (1+t)^{-a_j} (t-T0)^{b_j}, t > T0. Entry k of
/// each vector holds index j = k + 1.
struct SubcriticalSequences {
    ExponentContext ctx;
    exponents::IterationExponents exps;
    double T0 = 1.0;
    double C0 = 1.0;
    double log_D1 = 0.0;
    double log_C3 = 0.0;  // C3 = C0 / beta_it^2
    double Sp_inf = 0.0;  // 2p log p/(p-1)^2 - p log C3/(p-1)
    int threshold_index = 1;

    std::vector<double> a;                // a_{j+1} = mu + (m+2)n(p-1)/2 + p a_j
    std::vector<double> b;                // b_{j+1} = mu + 2 + p b_j
    std::vector<double> a_closed;         // alpha_it p^{j-1} - ((m+2)n/2 + mu/(p-1))
    std::vector<double> b_closed;         // beta_it p^{j-1} - (mu+2)/(p-1)
    std::vector<double> log_D;            // D_{j+1} = C0 D_j^p / ((mu+p b_j+1)(mu+p b_j+2))
    std::vector<double> log_D_lower;      // D_{j+1} = C3 D_j^p / p^{2j}
    std::vector<double> log_D_lower_closed;
    std::vector<double> log_D_bound;      // p^{j-1}(log D1 - Sp_inf)

    int size() const { return static_cast<int>(a.size()); }
};

/// Throws ScopeError unless 1 < p < p_crit(m,n).
SubcriticalSequences subcritical_run(const ExponentContext& ctx, double D1, double T0, int jmax, double C0 = 1.0);

/// J(t) = log D1 - Sp_inf - alpha_it log(1+t) + beta_it log(t - T0). Requires t > T0.
double j_function(double t, const SubcriticalSequences& seq);

/// max{T0 + (e^{Sp_inf + alpha_it log 2 + 1}/D1)^{2(p-1)/gamma}, 2T0 + 1}:
/// past this time J(t) > 1.
double j_threshold_closed_form(const SubcriticalSequences& seq);

/// First t in (T0, t_hi] at which J(t) exceeds level, by bracketing on a
/// logarithmic scan then bisection. Returns +inf if none.
double j_first_crossing(const SubcriticalSequences& seq, double level, double t_hi);

/// log(D_j (1+t)^{-a_j} (t-T0)^{b_j}) using the exact-denominator D_j.
double log_lower_bound(const SubcriticalSequences& seq, int j, double t);

struct BlowupEstimate {
    double C4 = 0.0;
    double exponent = 0.0; // 2p(p-1)/gamma
    double bound = 0.0;    // C4 eps^{-exponent}
};

/// T <= C4 eps^{-2p(p-1)/gamma} with D1 = C2 eps^p.
BlowupEstimate blowup_time_estimate(const ExponentContext& ctx, double eps, double C2, double T0, double C0 = 1.0);

struct ThresholdCrossing {
    int j = 0;         // iteration index attaining the ceiling
    double t = 0.0;    // first such time
    double log_t = 0.0;
    bool found = false;
};

/// Smallest t at which some lower bound j <= seq.size() exceeds exp(log_ceiling).
ThresholdCrossing subcritical_threshold(const SubcriticalSequences& seq, double log_ceiling, double t_hi = 1e300);

// ------------------------------------------------------------------- critical

struct CriticalConstants {
    double C = 1.0;  // frame constant
    double C0 = 1.0; // L^p lower-bound constant
    double B1 = 1.0; // test-function constant
    /// Denominator of N = C M^p / N_den. Zero selects the default 3^2 * 7 * (p+1).
    double N_denominator = 0.0;
};

/// Slicing lower bounds <t>^{m/4} F(t) >= C_j (log<t>)^{-b_j} (log(t/l_j))^{a_j}
/// for t >= l_j. Entry k holds index j = k (j = 0 is the initiation step).
struct CriticalSequences {
    ExponentContext ctx;
    double eps = 0.0;
    double M = 0.0;      // C0 B1 / 3^3
    double log_N = 0.0;
    double log_E = 0.0;  // E = C (p-1) / (2^3 3^2 p^2)
    double log_C1 = 0.0; // C1 = N eps^{p^2}

    std::vector<double> a;         // (p^{j+1} - 1)/(p-1)
    std::vector<double> b;         // p^j - 1
    std::vector<double> a_rec;     // a_{j+1} = p a_j + 1
    std::vector<double> b_rec;     // b_{j+1} = p b_j + p - 1
    std::vector<double> l;         // 2 - 2^{-(j+1)}
    std::vector<double> S;         // sum_{i=1}^{j-1} i / p^i
    std::vector<double> log_C;     // closed form, index >= 1
    std::vector<double> log_C_rec; // C_{j+1} = E C_j^p / (2p)^j, index >= 1

    int size() const { return static_cast<int>(a.size()); }
};

/// Throws ScopeError unless gamma(m,n,p) vanishes within 1e-9.
CriticalSequences critical_run(const ExponentContext& ctx, double eps, const CriticalConstants& constants, int jmax);

/// log of the j-th slicing bound at the time t = exp(log_t), j >= 1.
/// Returns -inf for t < l_j.
double log_slicing_bound(const CriticalSequences& seq, int j, double log_t);

/// log of the initiation bound M eps^p log(t/(3/2)) at t.
double log_initiation_bound(const CriticalSequences& seq, double t);

/// Smallest log t at which some slicing bound j <= seq.size()-1 exceeds
/// exp(log_ceiling). Searched over log t in [log 2, log_t_hi].
ThresholdCrossing critical_threshold(const CriticalSequences& seq, double log_ceiling, double log_t_hi = 1e300);

// --------------------------------------------------------- scaling extraction

struct ScalingPoint {
    double eps = 0.0;
    double log_T = 0.0;      // log of the extracted threshold time
    double log_log_T = 0.0;
    int j = 0;
};

struct ScalingExtraction {
    std::vector<ScalingPoint> points;
    double slope = 0.0;        // fitted slope (log T or log log T against log eps)
    double theory_slope = 0.0; // -2p(p-1)/gamma or -p(p-1)
};

/// Threshold times of the subcritical engine for each eps (D1 = C2 eps^p)
/// and the fitted slope of log T against log eps.
ScalingExtraction subcritical_scaling(const ExponentContext& ctx, const std::vector<double>& eps, double C2 = 1.0,
                                      double T0 = 1.0, int jmax = kMaxIterations, double log_ceiling = 700.0);

/// Threshold times of the critical engine and the slope of log log T
/// against log eps.
ScalingExtraction critical_scaling(const ExponentContext& ctx, const std::vector<double>& eps,
                                   const CriticalConstants& constants = {}, int jmax = kMaxIterations,
                                   double log_ceiling = 700.0);

} // namespace tricomi::iteration
