#include "tricomi/pde_solver.hpp"

#include "tricomi/errors.hpp"
#include "tricomi/exponents.hpp"
#include "tricomi/specfun.hpp"
#include "tricomi/tricomi_ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tricomi::pde {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Leapfrog precursors decay super-exponentially ahead of the cone; values
// this small are flushed to keep the arithmetic out of subnormals.
constexpr double kFlush = 1e-280;
constexpr double kStableFraction = 0.98;

// Largest eigenvalue of -Laplacian. The operator is symmetric in the
// volume-weighted inner product, so bisect on Sturm counts of the symmetric
// tridiagonal form; the Gershgorin bound brackets it.
double spectral_radius(const Grid& g)
{
    const int count = static_cast<int>(g.r.size());
    double hi = 0.0;
    for (int i = 0; i < count; ++i) {
        hi = std::max(hi, 2.0 * (g.c_plus[i] + g.c_minus[i]));
    }
    // eigenvalues of -L below x
    auto below = [&](double x) {
        int k = 0;
        double d = 1.0;
        for (int i = 0; i < count; ++i) {
            const double off2 = i == 0 ? 0.0 : g.c_plus[i - 1] * g.c_minus[i];
            d = (g.c_plus[i] + g.c_minus[i] - x) - (i == 0 ? 0.0 : off2 / d);
            if (d == 0.0) {
                d = -1e-300;
            }
            if (d < 0.0) {
                ++k;
            }
        }
        return k;
    };
    double lo = 0.0;
    for (int it = 0; it < 80 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (below(mid) < count ? lo : hi) = mid;
    }
    return hi;
}

std::shared_ptr<const Grid> make_grid(int n, double dx, double radius)
{
    auto g = std::make_shared<Grid>();
    g->n = n;
    g->dx = dx;
    g->sphere = specfun::sphere_measure(n);
    const int count = static_cast<int>(std::ceil(radius / dx)) + 1;
    g->r.resize(count);
    g->volume.resize(count);
    g->c_plus.resize(count);
    g->c_minus.resize(count);
    for (int i = 0; i < count; ++i) {
        const double r = i * dx;
        const double lo = std::max(0.0, r - 0.5 * dx);
        const double hi = r + 0.5 * dx;
        g->r[i] = r;
        g->volume[i] = (std::pow(hi, n) - std::pow(lo, n)) / n;
        const double a_plus = std::pow(hi, n - 1);
        const double a_minus = i == 0 ? 0.0 : std::pow(lo, n - 1);
        g->c_plus[i] = a_plus / (dx * g->volume[i]);
        g->c_minus[i] = a_minus / (dx * g->volume[i]);
    }
    g->stable_dx = 2.0 / std::sqrt(spectral_radius(*g));
    return g;
}

inline double source(double u, double p)
{
    const double a = std::abs(u);
    if (a == 0.0) {
        return 0.0;
    }
    return p == 2.0 ? a * a : std::pow(a, p);
}

double lap_at(const Grid& g, const std::vector<double>& u, int i)
{
    const int last = static_cast<int>(u.size()) - 1;
    const double right = i < last ? u[i + 1] : 0.0;
    const double left = i > 0 ? u[i - 1] : 0.0;
    return g.c_plus[i] * (right - u[i]) - g.c_minus[i] * (u[i] - left);
}

void refresh_active(SolverState& s, int upper)
{
    int a = std::min(upper, static_cast<int>(s.u.size()));
    while (a > 0 && s.u[a - 1] == 0.0 && s.u_prev[a - 1] == 0.0) {
        --a;
    }
    s.active = a;
}

void refresh_max(SolverState& s)
{
    double mx = 0.0;
    bool finite = true;
    for (int i = 0; i < s.active; ++i) {
        const double a = std::abs(s.u[i]);
        if (!std::isfinite(a)) {
            finite = false;
        }
        mx = std::max(mx, a);
    }
    s.max_abs = mx;
    s.nonfinite = !finite;
}

// eta_q(x,t,t) on a uniform radius grid, interpolated with 4-point Lagrange.
class EtaTable {
public:
    EtaTable(const testfun::TestFnParams& tf, double t, double r_max, int nodes)
        : h_(r_max / (nodes - 1))
    {
        values_.resize(nodes);
        for (int k = 0; k < nodes; ++k) {
            values_[k] = testfun::eta_q(k * h_, t, t, tf);
        }
    }

    double operator()(double r) const
    {
        const int last = static_cast<int>(values_.size()) - 1;
        const double x = r / h_;
        int k = static_cast<int>(std::floor(x)) - 1;
        k = std::clamp(k, 0, last - 3);
        double sum = 0.0;
        for (int a = 0; a < 4; ++a) {
            double w = 1.0;
            for (int b = 0; b < 4; ++b) {
                if (a != b) {
                    w *= (x - (k + b)) / static_cast<double>(a - b);
                }
            }
            sum += w * values_[k + a];
        }
        return sum;
    }

private:
    double h_;
    std::vector<double> values_;
};

double crossing_time(double t0, double m0, double t1, double m1, double level)
{
    if (!(m1 > m0) || !std::isfinite(m1) || m0 <= 0.0) {
        return t1;
    }
    const double w = (std::log(level) - std::log(m0)) / (std::log(m1) - std::log(m0));
    return t0 + std::clamp(w, 0.0, 1.0) * (t1 - t0);
}

} // namespace

const char* to_string(Profile profile)
{
    switch (profile) {
    case Profile::Bump4:
        return "bump4";
    case Profile::Smooth:
        return "smooth";
    }
    return "?";
}

Profile profile_from_string(const std::string& name)
{
    if (name == "bump4") {
        return Profile::Bump4;
    }
    if (name == "smooth") {
        return Profile::Smooth;
    }
    throw ConfigError("unknown profile '" + name + "' (expected bump4 or smooth)");
}

double profile_value(Profile profile, double r, double R)
{
    const double s = r / R;
    if (!(s < 1.0)) {
        return 0.0;
    }
    const double w = 1.0 - s * s;
    switch (profile) {
    case Profile::Bump4:
        return w * w * w * w;
    case Profile::Smooth:
        return std::exp(1.0 - 1.0 / w);
    }
    return 0.0;
}

testfun::TestFnParams RunConfig::test_function() const
{
    testfun::TestFnParams tf;
    tf.m = model.m;
    tf.n = model.n;
    tf.R = model.R;
    tf.lambda0 = lambda0;
    tf.q = q_auto ? exponents::frame_q({model.m, model.n, model.p}) : q;
    return tf;
}

void validate(const RunConfig& c)
{
    const ModelParams& m = c.model;
    if (!(m.m >= 0.0) || !std::isfinite(m.m)) {
        throw ConfigError("m must be nonnegative");
    }
    if (m.n < 1 || m.n > 3) {
        throw ConfigError("n must be 1, 2 or 3 (radial solver), got " + std::to_string(m.n));
    }
    if (!(m.p > 1.0)) {
        throw ConfigError("p must exceed 1");
    }
    if (!(m.R > 0.0)) {
        throw ConfigError("R must be positive");
    }
    if (!(m.eps >= 0.0) || !std::isfinite(m.eps)) {
        throw ConfigError("eps must be nonnegative");
    }
    if (!(c.dx > 0.0) || !(c.dx < m.R)) {
        throw ConfigError("dx must lie in (0, R)");
    }
    if (!(c.t_max > 0.0)) {
        throw ConfigError("t_max must be positive");
    }
    if (!(c.cfl > 0.0 && c.cfl < 1.0)) {
        throw ConfigError("cfl must lie in (0, 1)");
    }
    if (!(c.blowup_threshold > c.confirm_threshold) || !(c.confirm_threshold > 0.0)) {
        throw ConfigError("need 0 < confirm_threshold < blowup_threshold");
    }
    if (!(c.u1_scale >= 0.0)) {
        throw ConfigError("u1_scale must be nonnegative");
    }
    if (!(c.support_tol >= 0.0 && c.support_tol < 1.0)) {
        throw ConfigError("support_tol must lie in [0, 1)");
    }
    if (!(c.f_interval >= 0.0)) {
        throw ConfigError("f_interval must be nonnegative");
    }
    if (c.record_stride < 1) {
        throw ConfigError("record_stride must be at least 1");
    }
    if (!(c.lambda0 > 0.0)) {
        throw ConfigError("lambda0 must be positive");
    }
    if (c.f_interval > 0.0 && !(c.test_function().q > -1.0)) {
        throw ConfigError("test-function exponent q must exceed -1");
    }
    const double needed = m.R + ode::phi_of_t(m.m, c.t_max) + 5.0 * c.dx;
    if (c.domain_radius != 0.0 && c.domain_radius < needed) {
        throw ConfigError("domain_radius " + std::to_string(c.domain_radius) +
                          " is inside the propagation cone; need at least " + std::to_string(needed));
    }
}

double resolved_domain_radius(const RunConfig& c)
{
    if (c.domain_radius > 0.0) {
        return c.domain_radius;
    }
    const double cone = c.model.R + ode::phi_of_t(c.model.m, c.t_max);
    return cone + std::max(50.0 * c.dx, 0.05 * cone);
}

double resolved_support_tol(const RunConfig& c)
{
    return c.support_tol > 0.0 ? c.support_tol : c.dx * c.dx;
}

SolverState initialize(const RunConfig& cfg)
{
    validate(cfg);
    SolverState s;
    s.grid = make_grid(cfg.model.n, cfg.dx, resolved_domain_radius(cfg));
    const Grid& g = *s.grid;
    const int count = static_cast<int>(g.r.size());
    s.u.assign(count, 0.0);
    s.u_prev.assign(count, 0.0);
    for (int i = 0; i < count; ++i) {
        s.u[i] = cfg.model.eps * profile_value(cfg.profile, g.r[i], cfg.model.R);
    }
    // u_prev carries eps u1 until the Taylor start consumes it.
    for (int i = 0; i < count; ++i) {
        s.u_prev[i] = cfg.u1_scale * s.u[i];
    }
    refresh_active(s, count);
    refresh_max(s);
    return s;
}

double next_dt(const SolverState& s, const RunConfig& cfg)
{
    // cfl is relative to dx; the clamp only binds near the origin cell for n >= 2
    const double reach = std::min(cfg.cfl * cfg.dx, kStableFraction * s.grid->stable_dx);
    const double half_m = 0.5 * cfg.model.m;
    const double floor = std::sqrt(cfg.dx);
    double dt = reach / std::max(std::pow(s.t, half_m), floor);
    dt = reach / std::max(std::pow(s.t + dt, half_m), floor);
    if (cfg.nonlinear && s.max_abs > 0.0) {
        const double rate = cfg.model.p * std::pow(s.max_abs, cfg.model.p - 1.0);
        dt = std::min(dt, cfg.cfl / std::sqrt(rate));
    }
    const double left = cfg.t_max - s.t;
    if (dt > left) {
        dt = left;
    }
    return dt;
}

void step(SolverState& s, const RunConfig& cfg)
{
    const Grid& g = *s.grid;
    const double p = cfg.model.p;
    const double h = next_dt(s, cfg);
    if (!(h > 0.0)) {
        throw NumericalError("step: nonpositive step size at t = " + std::to_string(s.t));
    }
    const int count = static_cast<int>(s.u.size());
    const int upper = std::min(count, s.active + 1);
    std::vector<double>& next = s.u_prev;

    if (s.step == 0) {
        // u(h) = u0 + h u1 + h^2/2 (0^m Lap u0 + |u0|^p)
        const double lap_weight = cfg.model.m == 0.0 ? 1.0 : 0.0;
        std::vector<double> start(count, 0.0);
        for (int i = 0; i < upper; ++i) {
            double acc = lap_weight * lap_at(g, s.u, i);
            if (cfg.nonlinear) {
                acc += source(s.u[i], p);
            }
            double v = s.u[i] + h * s.u_prev[i] + 0.5 * h * h * acc;
            start[i] = std::abs(v) < kFlush ? 0.0 : v;
        }
        next.swap(start);
    } else {
        const double ratio = h / s.dt;
        const double weight = 0.5 * h * (h + s.dt);
        const double tm = cfg.model.m == 0.0 ? 1.0 : std::pow(s.t, cfg.model.m);
        for (int i = 0; i < upper; ++i) {
            double acc = tm * lap_at(g, s.u, i);
            if (cfg.nonlinear) {
                acc += source(s.u[i], p);
            }
            double v = s.u[i] + ratio * (s.u[i] - next[i]) + weight * acc;
            next[i] = std::abs(v) < kFlush ? 0.0 : v;
        }
    }
    s.u.swap(s.u_prev);
    s.t += h;
    s.dt = h;
    ++s.step;
    refresh_active(s, upper);
    refresh_max(s);
}

double functional_G(const SolverState& s)
{
    const Grid& g = *s.grid;
    double sum = 0.0;
    for (int i = 0; i < s.active; ++i) {
        sum += g.volume[i] * s.u[i];
    }
    return g.sphere * sum;
}

double functional_Lp(const SolverState& s, double p)
{
    const Grid& g = *s.grid;
    double sum = 0.0;
    for (int i = 0; i < s.active; ++i) {
        sum += g.volume[i] * source(s.u[i], p);
    }
    return g.sphere * sum;
}

double functional_F(const SolverState& s, const testfun::TestFnParams& tf, int nodes)
{
    const Grid& g = *s.grid;
    int last = s.active;
    while (last > 0 && s.u[last - 1] == 0.0) {
        --last;
    }
    if (last == 0) {
        return 0.0;
    }
    double sum = 0.0;
    if (nodes > 0) {
        const EtaTable eta(tf, s.t, std::max(g.r[last - 1], 4.0 * g.dx), std::max(nodes, 4));
        for (int i = 0; i < last; ++i) {
            if (s.u[i] != 0.0) {
                sum += g.volume[i] * s.u[i] * eta(g.r[i]);
            }
        }
    } else {
        for (int i = 0; i < last; ++i) {
            if (s.u[i] != 0.0) {
                sum += g.volume[i] * s.u[i] * testfun::eta_q(g.r[i], s.t, s.t, tf);
            }
        }
    }
    return g.sphere * sum;
}

double support_radius(const SolverState& s, double rel_tol)
{
    if (s.max_abs == 0.0) {
        return 0.0;
    }
    const double level = rel_tol * s.max_abs;
    for (int i = s.active - 1; i >= 0; --i) {
        if (std::abs(s.u[i]) > level) {
            return s.grid->r[i];
        }
    }
    return 0.0;
}

RunResult run_until_blowup(const RunConfig& cfg)
{
    SolverState s = initialize(cfg);
    const testfun::TestFnParams tf = cfg.test_function();
    const double p = cfg.model.p;
    constexpr int kEtaNodes = 400;
    const double support_tol = resolved_support_tol(cfg);

    RunResult out;
    out.dx = cfg.dx;
    LifespanRecord& rec = out.record;
    rec.eps = cfg.model.eps;
    rec.T_blowup = kNaN;
    rec.T_confirm = kNaN;
    double next_f = 0.0;

    auto observe = [&](bool force) {
        const double support = support_radius(s, support_tol);
        const double excess = support - (cfg.model.R + ode::phi_of_t(cfg.model.m, s.t));
        out.max_support_excess = s.step == 0 ? excess : std::max(out.max_support_excess, excess);
        SeriesRow row;
        row.t = s.t;
        row.max_u = s.max_abs;
        row.G = functional_G(s);
        row.Lp = functional_Lp(s, p);
        row.support = support;
        row.F = kNaN;
        if (cfg.f_interval > 0.0 && s.t >= next_f) {
            row.F = functional_F(s, tf, kEtaNodes);
            while (next_f <= s.t) {
                next_f += cfg.f_interval;
            }
            force = true;
        }
        if (force || s.step % cfg.record_stride == 0) {
            out.series.push_back(row);
        }
    };

    observe(true);
    rec.peak = s.max_abs;
    while (s.t < cfg.t_max) {
        const double t0 = s.t;
        const double m0 = s.max_abs;
        step(s, cfg);
        if (s.nonfinite) {
            if (std::isnan(rec.T_confirm)) {
                rec.T_confirm = s.t;
            }
            rec.T_blowup = s.t;
            rec.censored = false;
            break;
        }
        rec.peak = std::max(rec.peak, s.max_abs);
        if (std::isnan(rec.T_confirm) && s.max_abs >= cfg.confirm_threshold) {
            rec.T_confirm = crossing_time(t0, m0, s.t, s.max_abs, cfg.confirm_threshold);
        }
        const bool done = s.max_abs >= cfg.blowup_threshold;
        observe(done || s.t >= cfg.t_max);
        if (done) {
            rec.T_blowup = crossing_time(t0, m0, s.t, s.max_abs, cfg.blowup_threshold);
            rec.censored = false;
            break;
        }
    }
    rec.t_end = s.t;
    rec.steps = s.step;
    rec.threshold_consistent =
        !rec.censored && std::abs(rec.T_blowup / rec.T_confirm - 1.0) <= 0.02;
    return out;
}

} // namespace tricomi::pde
