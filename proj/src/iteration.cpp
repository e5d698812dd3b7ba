#include "tricomi/iteration.hpp"

#include "tricomi/errors.hpp"
#include "tricomi/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tricomi::iteration {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_jmax(int jmax)
{
    if (jmax < 1 || jmax > kMaxIterations) {
        throw DomainError("iteration: jmax must lie in [1, " + std::to_string(kMaxIterations) + "], got " +
                          std::to_string(jmax));
    }
}

// Bisection on a predicate that is false at lo and true at hi.
template <class Pred>
double bisect(Pred pred, double lo, double hi, int iters = 200)
{
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        (pred(mid) ? hi : lo) = mid;
    }
    return hi;
}

} // namespace

// ---------------------------------------------------------------- subcritical

SubcriticalSequences subcritical_run(const ExponentContext& ctx, double D1, double T0, int jmax, double C0)
{
    if (exponents::classify(ctx) != exponents::Regime::Subcritical || !(ctx.p > 1.0)) {
        throw ScopeError("subcritical_run: p = " + std::to_string(ctx.p) + " is not in (1, p_crit)");
    }
    if (!(D1 > 0.0) || !(C0 > 0.0)) {
        throw DomainError("subcritical_run: D1 and C0 must be positive");
    }
    if (!(T0 >= 0.0)) {
        throw DomainError("subcritical_run: T0 must be nonnegative");
    }
    check_jmax(jmax);

    SubcriticalSequences s;
    s.ctx = ctx;
    s.exps = exponents::iteration_exponents(ctx);
    s.T0 = T0;
    s.C0 = C0;
    s.log_D1 = std::log(D1);

    const double p = ctx.p;
    const double m = ctx.m;
    const double n = ctx.n;
    const double mu = s.exps.mu;
    const double lp = std::log(p);
    s.log_C3 = std::log(C0) - 2.0 * std::log(s.exps.beta_it);
    s.Sp_inf = 2.0 * p * lp / ((p - 1.0) * (p - 1.0)) - p * s.log_C3 / (p - 1.0);
    s.threshold_index = static_cast<int>(std::floor(p * s.log_C3 / (2.0 * lp) - 1.0 / (p - 1.0))) + 1;

    const double a_shift = (m + 2.0) * n / 2.0 + mu / (p - 1.0);
    const double b_shift = (mu + 2.0) / (p - 1.0);
    const double a_step = mu + (m + 2.0) * n * (p - 1.0) / 2.0;
    const double b_step = mu + 2.0;

    double a = s.exps.a1;
    double b = s.exps.b1;
    double lD = s.log_D1;
    double lDl = s.log_D1;
    for (int j = 1; j <= jmax; ++j) {
        const double pj = std::pow(p, j - 1);
        s.a.push_back(a);
        s.b.push_back(b);
        s.a_closed.push_back(s.exps.alpha_it * pj - a_shift);
        s.b_closed.push_back(s.exps.beta_it * pj - b_shift);
        s.log_D.push_back(lD);
        s.log_D_lower.push_back(lDl);

        // sum_{i=1}^{j-1} i p^{j-1-i} = ((p^j - 1)/(p-1) - j)/(p-1)
        const double weighted = ((p * pj - 1.0) / (p - 1.0) - j) / (p - 1.0);
        s.log_D_lower_closed.push_back(pj * s.log_D1 - 2.0 * lp * weighted + s.log_C3 * (pj - 1.0) / (p - 1.0));
        s.log_D_bound.push_back(pj * (s.log_D1 - s.Sp_inf));

        lD = std::log(C0) + p * lD - std::log((mu + p * b + 1.0) * (mu + p * b + 2.0));
        lDl = s.log_C3 + p * lDl - 2.0 * j * lp;
        a = a_step + p * a;
        b = b_step + p * b;
    }
    return s;
}

double j_function(double t, const SubcriticalSequences& seq)
{
    if (!(t > seq.T0)) {
        throw DomainError("j_function: requires t > T0 (t = " + std::to_string(t) + ")");
    }
    return seq.log_D1 - seq.Sp_inf - seq.exps.alpha_it * std::log1p(t) + seq.exps.beta_it * std::log(t - seq.T0);
}

double j_threshold_closed_form(const SubcriticalSequences& seq)
{
    const double gamma = exponents::gamma_mnp(seq.ctx);
    const double p = seq.ctx.p;
    const double log_base = seq.Sp_inf + seq.exps.alpha_it * std::log(2.0) + 1.0 - seq.log_D1;
    const double t = seq.T0 + std::exp(2.0 * (p - 1.0) / gamma * log_base);
    return std::max(t, 2.0 * seq.T0 + 1.0);
}

double j_first_crossing(const SubcriticalSequences& seq, double level, double t_hi)
{
    // scan x = log(t - T0)
    const double x_lo = -30.0;
    const double x_hi = std::log(t_hi - seq.T0);
    auto above = [&](double x) { return j_function(seq.T0 + std::exp(x), seq) > level; };
    if (above(x_lo)) {
        return seq.T0 + std::exp(x_lo);
    }
    const double step = 0.01;
    double prev = x_lo;
    for (double x = x_lo + step; x <= x_hi + step; x += step) {
        const double xc = std::min(x, x_hi);
        if (above(xc)) {
            return seq.T0 + std::exp(bisect(above, prev, xc));
        }
        prev = xc;
        if (xc == x_hi) {
            break;
        }
    }
    return kInf;
}

double log_lower_bound(const SubcriticalSequences& seq, int j, double t)
{
    if (j < 1 || j > seq.size()) {
        throw DomainError("log_lower_bound: index out of range");
    }
    if (!(t > seq.T0)) {
        return -kInf;
    }
    const int k = j - 1;
    return seq.log_D[k] - seq.a[k] * std::log1p(t) + seq.b[k] * std::log(t - seq.T0);
}

BlowupEstimate blowup_time_estimate(const ExponentContext& ctx, double eps, double C2, double T0, double C0)
{
    if (!(eps > 0.0) || !(C2 > 0.0)) {
        throw DomainError("blowup_time_estimate: eps and C2 must be positive");
    }
    const SubcriticalSequences seq = subcritical_run(ctx, C2 * std::pow(eps, ctx.p), T0, 1, C0);
    const double gamma = exponents::gamma_mnp(ctx);
    const double p = ctx.p;
    BlowupEstimate est;
    est.exponent = 2.0 * p * (p - 1.0) / gamma;
    const double log_c4 =
        2.0 * (p - 1.0) / gamma * (seq.Sp_inf + seq.exps.alpha_it * std::log(2.0) + 1.0 - std::log(C2));
    est.C4 = std::exp(log_c4);
    est.bound = std::exp(log_c4 - est.exponent * std::log(eps));
    return est;
}

ThresholdCrossing subcritical_threshold(const SubcriticalSequences& seq, double log_ceiling, double t_hi)
{
    auto above = [&](double x) {
        const double t = seq.T0 + std::exp(x);
        for (int j = 1; j <= seq.size(); ++j) {
            if (log_lower_bound(seq, j, t) >= log_ceiling) {
                return true;
            }
        }
        return false;
    };
    ThresholdCrossing out;
    const double x_lo = -20.0;
    const double x_hi = std::log(t_hi - seq.T0);
    const double step = 0.02;
    double prev = x_lo;
    double hit = kInf;
    if (above(x_lo)) {
        hit = x_lo;
    } else {
        for (double x = x_lo + step; x < x_hi + step; x += step) {
            const double xc = std::min(x, x_hi);
            if (above(xc)) {
                hit = bisect(above, prev, xc);
                break;
            }
            prev = xc;
        }
    }
    if (!std::isfinite(hit)) {
        return out;
    }
    out.found = true;
    out.t = seq.T0 + std::exp(hit);
    out.log_t = std::log(out.t);
    for (int j = 1; j <= seq.size(); ++j) {
        if (log_lower_bound(seq, j, out.t) >= log_ceiling) {
            out.j = j;
            break;
        }
    }
    return out;
}

// ------------------------------------------------------------------- critical

CriticalSequences critical_run(const ExponentContext& ctx, double eps, const CriticalConstants& k, int jmax)
{
    if (exponents::classify(ctx) != exponents::Regime::Critical) {
        throw ScopeError("critical_run: p = " + std::to_string(ctx.p) + " is not the critical exponent");
    }
    if (!(eps > 0.0)) {
        throw DomainError("critical_run: eps must be positive");
    }
    if (!(k.C > 0.0) || !(k.C0 > 0.0) || !(k.B1 > 0.0) || k.N_denominator < 0.0) {
        throw DomainError("critical_run: constants must be positive");
    }
    check_jmax(jmax);

    const double p = ctx.p;
    CriticalSequences s;
    s.ctx = ctx;
    s.eps = eps;
    s.M = k.C0 * k.B1 / 27.0;
    const double n_den = k.N_denominator > 0.0 ? k.N_denominator : 63.0 * (p + 1.0);
    s.log_N = std::log(k.C) + p * std::log(s.M) - std::log(n_den);
    s.log_E = std::log(k.C) + std::log(p - 1.0) - std::log(72.0 * p * p);
    s.log_C1 = s.log_N + p * p * std::log(eps);
    const double l2p = std::log(2.0 * p);

    double a_rec = 1.0;
    double b_rec = 0.0;
    double S = 0.0;
    double lC_rec = std::log(s.M) + p * std::log(eps);
    for (int j = 0; j <= jmax; ++j) {
        const double pj = std::pow(p, j);
        s.a.push_back((p * pj - 1.0) / (p - 1.0));
        s.b.push_back(pj - 1.0);
        s.a_rec.push_back(a_rec);
        s.b_rec.push_back(b_rec);
        s.l.push_back(2.0 - std::ldexp(1.0, -(j + 1)));
        s.S.push_back(S);
        if (j == 0) {
            // initiation: M eps^p log(t / l_0)
            s.log_C.push_back(lC_rec);
            s.log_C_rec.push_back(lC_rec);
            lC_rec = s.log_C1;
        } else {
            s.log_C.push_back(pj / p * (s.log_C1 + s.log_E / (p - 1.0) - S * l2p) - s.log_E / (p - 1.0));
            s.log_C_rec.push_back(lC_rec);
            lC_rec = s.log_E + p * lC_rec - j * l2p;
        }
        a_rec = p * a_rec + 1.0;
        b_rec = p * b_rec + p - 1.0;
        if (j >= 1) {
            S += j / pj;
        }
    }
    return s;
}

double log_slicing_bound(const CriticalSequences& seq, int j, double log_t)
{
    if (j < 0 || j >= seq.size()) {
        throw DomainError("log_slicing_bound: index out of range");
    }
    const double slice = log_t - std::log(seq.l[j]);
    if (!(slice > 0.0)) {
        return -kInf;
    }
    // log<t> = log(3 + t)
    const double log_bracket = log_t + std::log1p(3.0 * std::exp(-log_t));
    return seq.log_C[j] - seq.b[j] * std::log(log_bracket) + seq.a[j] * std::log(slice);
}

double log_initiation_bound(const CriticalSequences& seq, double t)
{
    if (!(t > 1.5)) {
        return -kInf;
    }
    return seq.log_C[0] + std::log(std::log(t / 1.5));
}

ThresholdCrossing critical_threshold(const CriticalSequences& seq, double log_ceiling, double log_t_hi)
{
    // scan y = log log t
    auto above = [&](double y) {
        const double log_t = std::exp(y);
        for (int j = 1; j < seq.size(); ++j) {
            if (log_slicing_bound(seq, j, log_t) >= log_ceiling) {
                return true;
            }
        }
        return false;
    };
    ThresholdCrossing out;
    const double y_lo = std::log(std::log(2.0));
    const double y_hi = std::log(log_t_hi);
    const double step = 0.01;
    double prev = y_lo;
    double hit = kInf;
    if (above(y_lo)) {
        hit = y_lo;
    } else {
        for (double y = y_lo + step; y < y_hi + step; y += step) {
            const double yc = std::min(y, y_hi);
            if (above(yc)) {
                hit = bisect(above, prev, yc);
                break;
            }
            prev = yc;
        }
    }
    if (!std::isfinite(hit)) {
        return out;
    }
    out.found = true;
    out.log_t = std::exp(hit);
    out.t = std::exp(out.log_t);
    for (int j = 1; j < seq.size(); ++j) {
        if (log_slicing_bound(seq, j, out.log_t) >= log_ceiling) {
            out.j = j;
            break;
        }
    }
    return out;
}

// --------------------------------------------------------- scaling extraction

ScalingExtraction subcritical_scaling(const ExponentContext& ctx, const std::vector<double>& eps, double C2,
                                      double T0, int jmax, double log_ceiling)
{
    ScalingExtraction out;
    out.theory_slope = -exponents::subcritical_lifespan_exponent(ctx);
    std::vector<double> x;
    std::vector<double> y;
    for (double e : eps) {
        const SubcriticalSequences seq = subcritical_run(ctx, C2 * std::pow(e, ctx.p), T0, jmax);
        const ThresholdCrossing c = subcritical_threshold(seq, log_ceiling);
        if (!c.found) {
            throw NumericalError("subcritical_scaling: no threshold crossing for eps = " + std::to_string(e));
        }
        out.points.push_back({e, c.log_t, std::log(c.log_t), c.j});
        x.push_back(std::log(e));
        y.push_back(c.log_t);
    }
    out.slope = stats::ols(x, y).slope;
    return out;
}

ScalingExtraction critical_scaling(const ExponentContext& ctx, const std::vector<double>& eps,
                                   const CriticalConstants& constants, int jmax, double log_ceiling)
{
    ScalingExtraction out;
    out.theory_slope = -ctx.p * (ctx.p - 1.0);
    std::vector<double> x;
    std::vector<double> y;
    for (double e : eps) {
        const CriticalSequences seq = critical_run(ctx, e, constants, jmax);
        const ThresholdCrossing c = critical_threshold(seq, log_ceiling);
        if (!c.found) {
            throw NumericalError("critical_scaling: no threshold crossing for eps = " + std::to_string(e));
        }
        out.points.push_back({e, c.log_t, std::log(c.log_t), c.j});
        x.push_back(std::log(e));
        y.push_back(std::log(c.log_t));
    }
    out.slope = stats::ols(x, y).slope;
    return out;
}

} // namespace tricomi::iteration
