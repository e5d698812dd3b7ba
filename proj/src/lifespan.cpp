#include "tricomi/lifespan.hpp"

#include "tricomi/errors.hpp"
#include "tricomi/specfun.hpp"
#include "tricomi/stats.hpp"
#include "tricomi/tricomi_ode.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace tricomi::lifespan {

namespace {

std::vector<RunResult> run_all(const RunConfig& templ, const std::vector<double>& eps, int threads)
{
    for (double e : eps) {
        if (!(e > 0.0)) {
            throw DomainError("lifespan_scan: eps values must be positive");
        }
    }
    if (!std::is_sorted(eps.begin(), eps.end())) {
        throw DomainError("lifespan_scan: eps list must be sorted");
    }
    std::vector<RunResult> out(eps.size());
    std::vector<std::string> errors(eps.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t k = next++; k < eps.size(); k = next++) {
            RunConfig cfg = templ;
            cfg.model.eps = eps[k];
            try {
                out[k] = pde::run_until_blowup(cfg);
            } catch (const std::exception& e) {
                errors[k] = e.what();
            }
        }
    };
    int count = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    count = std::clamp(count, 1, static_cast<int>(std::max<size_t>(1, eps.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < count; ++i) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }
    for (size_t k = 0; k < eps.size(); ++k) {
        if (!errors[k].empty()) {
            throw NumericalError("run at eps = " + std::to_string(eps[k]) + " failed: " + errors[k]);
        }
    }
    return out;
}

} // namespace

std::vector<RunResult> lifespan_runs(const RunConfig& templ, const std::vector<double>& eps, int threads)
{
    pde::validate(templ);
    return run_all(templ, eps, threads);
}

ScanResult lifespan_scan(const RunConfig& templ, const std::vector<double>& eps, int threads)
{
    ScanResult out;
    for (RunResult& r : lifespan_runs(templ, eps, threads)) {
        out.records.push_back(r.record);
    }
    double prev = std::numeric_limits<double>::infinity();
    for (const LifespanRecord& r : out.records) {
        if (r.censored) {
            ++out.censored;
            continue;
        }
        if (!(r.T_blowup < prev)) {
            out.monotone = false;
        }
        prev = r.T_blowup;
    }
    return out;
}

const char* to_string(FitMode mode)
{
    return mode == FitMode::Subcritical ? "subcritical" : "critical";
}

FitMode fit_mode_from_string(const std::string& name)
{
    if (name == "subcritical") {
        return FitMode::Subcritical;
    }
    if (name == "critical") {
        return FitMode::Critical;
    }
    throw ConfigError("unknown fit mode '" + name + "' (expected subcritical or critical)");
}

ScalingFit fit_scaling(const std::vector<LifespanRecord>& records, FitMode mode)
{
    ScalingFit fit;
    fit.mode = mode;
    std::vector<double> x;
    std::vector<double> y;
    for (const LifespanRecord& r : records) {
        if (r.censored || !(r.T_blowup > 0.0) || !(r.eps > 0.0)) {
            ++fit.excluded;
            continue;
        }
        double v = std::log(r.T_blowup);
        if (mode == FitMode::Critical) {
            if (!(v > 0.0)) {
                throw FitError("fit_scaling: critical mode needs T > 1, got " + std::to_string(r.T_blowup));
            }
            v = std::log(v);
        }
        x.push_back(std::log(r.eps));
        y.push_back(v);
    }
    if (x.size() < 4) {
        throw FitError("fit_scaling: need at least 4 uncensored records, have " + std::to_string(x.size()));
    }
    const stats::LineFit lf = stats::ols(x, y);
    fit.slope = lf.slope;
    fit.intercept = lf.intercept;
    fit.slope_stderr = lf.slope_stderr;
    fit.used = lf.count;
    double sse = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - lf.intercept - lf.slope * x[i];
        sse += r * r;
    }
    fit.residual = std::sqrt(sse / x.size());
    return fit;
}

double lp_envelope(const ModelParams& model, double t)
{
    const double phi = ode::phi_of_t(model.m, t);
    const double p = model.p;
    const double n = model.n;
    return std::pow(model.eps, p) * std::pow(1.0 + t, 0.5 * p) * std::pow(1.0 + phi, n - 1.0 - 0.5 * n * p);
}

LowerBoundWindow lp_lower_bound(const RunResult& run, const ModelParams& model, double T0)
{
    LowerBoundWindow w;
    w.eps = model.eps;
    w.t_lo = T0;
    const double t_end = run.record.censored ? run.record.t_end : run.record.T_blowup;
    w.t_hi = 0.5 * t_end;
    w.min_ratio = std::numeric_limits<double>::infinity();
    w.max_ratio = 0.0;
    for (const pde::SeriesRow& row : run.series) {
        if (row.t < w.t_lo || row.t > w.t_hi) {
            continue;
        }
        const double ratio = row.Lp / lp_envelope(model, row.t);
        w.min_ratio = std::min(w.min_ratio, ratio);
        w.max_ratio = std::max(w.max_ratio, ratio);
        ++w.points;
    }
    if (w.points == 0) {
        throw FitError("lp_lower_bound: empty window [" + std::to_string(w.t_lo) + ", " + std::to_string(w.t_hi) +
                       "]");
    }
    return w;
}

SecondDifferenceCheck second_difference_check(const RunResult& run, double t_stop)
{
    SecondDifferenceCheck out;
    const auto& s = run.series;
    // the first row pair straddles the Taylor start, skip it
    for (size_t k = 2; k + 1 < s.size(); ++k) {
        if (s[k + 1].t > t_stop) {
            break;
        }
        const double h0 = s[k].t - s[k - 1].t;
        const double h1 = s[k + 1].t - s[k].t;
        if (!(h0 > 0.0) || !(h1 > 0.0)) {
            continue;
        }
        const double g2 = 2.0 * ((s[k + 1].G - s[k].G) / h1 - (s[k].G - s[k - 1].G) / h0) / (h0 + h1);
        if (s[k].Lp > 0.0) {
            out.max_relative = std::max(out.max_relative, std::abs(g2 - s[k].Lp) / s[k].Lp);
            ++out.points;
        }
    }
    return out;
}

FrameCheck frame_check(const RunResult& run, const ModelParams& model, double t_stop)
{
    FrameCheck out;
    out.min_ratio_ball = std::numeric_limits<double>::infinity();
    out.min_ratio_bare = std::numeric_limits<double>::infinity();
    const auto& s = run.series;
    const double p = model.p;
    const double sphere = specfun::sphere_measure(model.n);
    auto ball = [&](double t) {
        const double rad = model.R + ode::phi_of_t(model.m, t);
        return sphere * std::pow(rad, model.n) / model.n;
    };
    auto bare = [&](double t) { return model.R + ode::phi_of_t(model.m, t); };

    // inner(tau) = int_0^tau w(s)|G(s)|^p ds, outer(t) = int_0^t inner
    double inner_ball = 0.0;
    double inner_bare = 0.0;
    double outer_ball = 0.0;
    double outer_bare = 0.0;
    for (size_t k = 1; k < s.size(); ++k) {
        if (s[k].t > t_stop) {
            break;
        }
        const double h = s[k].t - s[k - 1].t;
        const double g0 = std::pow(std::abs(s[k - 1].G), p);
        const double g1 = std::pow(std::abs(s[k].G), p);
        const double wb0 = std::pow(ball(s[k - 1].t), 1.0 - p);
        const double wb1 = std::pow(ball(s[k].t), 1.0 - p);
        const double wp0 = std::pow(bare(s[k - 1].t), -model.n * (p - 1.0));
        const double wp1 = std::pow(bare(s[k].t), -model.n * (p - 1.0));
        const double ib_prev = inner_ball;
        const double ip_prev = inner_bare;
        inner_ball += 0.5 * h * (wb0 * g0 + wb1 * g1);
        inner_bare += 0.5 * h * (wp0 * g0 + wp1 * g1);
        outer_ball += 0.5 * h * (ib_prev + inner_ball);
        outer_bare += 0.5 * h * (ip_prev + inner_bare);
        if (outer_ball > 0.0) {
            out.min_ratio_ball = std::min(out.min_ratio_ball, s[k].G / outer_ball);
        }
        if (outer_bare > 0.0) {
            out.min_ratio_bare = std::min(out.min_ratio_bare, s[k].G / outer_bare);
        }
        ++out.points;
    }
    return out;
}

} // namespace tricomi::lifespan
