#include "tricomi/testfun.hpp"

#include "tricomi/errors.hpp"
#include "tricomi/quadrature.hpp"
#include "tricomi/specfun.hpp"
#include "tricomi/tricomi_ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace tricomi::testfun {

namespace {

enum class Kernel { Phi1, Phi2Ratio };

void check_params(const TestFnParams& p)
{
    if (!(p.q > -1.0)) {
        throw DomainError("test function: q must exceed -1 for the lambda integral to converge, got " +
                          std::to_string(p.q));
    }
    if (!(p.lambda0 > 0.0) || !(p.R > 0.0)) {
        throw DomainError("test function: lambda0 and R must be positive");
    }
    if (p.n < 1) {
        throw DomainError("test function: n must be positive");
    }
    if (!(p.m >= 0.0)) {
        throw DomainError("test function: m must be nonnegative");
    }
}

void check_point(double x_norm, double t, double s)
{
    if (!(s >= 0.0) || !(t >= s)) {
        throw DomainError("test function: requires t >= s >= 0");
    }
    if (!(x_norm >= 0.0)) {
        throw DomainError("test function: x_norm must be nonnegative");
    }
}

// kernel(lambda) = mantissa * exp(log_scale)
ode::Scaled kernel_at(Kernel k, double lambda, double t, double s, double m)
{
    const ode::OdeParams op{m, lambda};
    if (t == s) {
        return {1.0, 0.0};
    }
    if (k == Kernel::Phi1) {
        if (s == 0.0) {
            const ode::GrowingSolution v = ode::growing_solution(op, t);
            return {v.g, v.log_scale};
        }
        return ode::phi1_scaled(t, s, op);
    }
    if (s == 0.0) {
        // V2(t)/t = e^{-z/2} M(1+alpha-gamma_K, 2-gamma_K; z)
        const double ak = m / (2.0 * (m + 2.0));
        const double gk = m / (m + 2.0);
        const double z = ode::z_of_t(op, t);
        return {specfun::kummer_m(1.0 + ak - gk, 2.0 - gk, z), -0.5 * z};
    }
    return ode::phi2_ratio_scaled(t, s, op);
}

Quadrature integrate_kernel(Kernel k, double x_norm, double t, double s, const TestFnParams& p, double rel_tol)
{
    check_params(p);
    check_point(x_norm, t, s);
    const double phi_t = ode::phi_of_t(p.m, t);

    auto h = [&](double lambda) {
        if (lambda == 0.0) {
            // kernel -> 1, varphi -> |S^{n-1}| (2 for n = 1)
            return p.n == 1 ? 2.0 : specfun::sphere_measure(p.n);
        }
        const ode::Scaled ker = kernel_at(k, lambda, t, s, p.m);
        const double expo = -lambda * (phi_t + p.R) + ker.log_scale + lambda * x_norm;
        return ker.mantissa * std::exp(expo) * specfun::varphi_scaled(p.n, lambda * x_norm);
    };

    // Features sit near lambda ~ 1/(phi(s) + R); seed a geometric partition.
    std::array<double, 8> cuts{};
    Quadrature out;
    if (p.q < 0.0) {
        // lambda = u^{1/(q+1)}: lambda^q d lambda = du/(q+1), integrand bounded at u = 0
        const double e = 1.0 / (p.q + 1.0);
        const double u_max = std::pow(p.lambda0, p.q + 1.0);
        for (int i = 0; i < 8; ++i) {
            cuts[i] = u_max * std::pow(10.0, -(8 - i) * (p.q + 1.0));
        }
        auto f = [&](double u) { return h(std::pow(u, e)) * e; };
        const quad::QuadResult r = quad::integrate(f, 0.0, u_max, rel_tol, 0.0, 3000, cuts);
        out = {r.value, r.abs_error};
    } else {
        for (int i = 0; i < 8; ++i) {
            cuts[i] = p.lambda0 * std::pow(10.0, -(8 - i));
        }
        auto f = [&](double lambda) { return lambda == 0.0 && p.q > 0.0 ? 0.0 : h(lambda) * std::pow(lambda, p.q); };
        const quad::QuadResult r = quad::integrate(f, 0.0, p.lambda0, rel_tol, 0.0, 3000, cuts);
        out = {r.value, r.abs_error};
    }
    return out;
}

std::vector<double> fractions(int count, double hi)
{
    std::vector<double> out;
    if (count <= 1) {
        out.push_back(hi);
        return out;
    }
    for (int i = 0; i < count; ++i) {
        out.push_back(hi * i / (count - 1));
    }
    return out;
}

std::vector<double> t_grid(const GridSpec& g)
{
    std::vector<double> ts;
    if (g.t_min <= 0.0) {
        ts.push_back(0.0);
    }
    const double lo = std::max(g.t_first, g.t_min);
    if (g.t_points <= 1) {
        ts.push_back(g.t_max);
        return ts;
    }
    const double a = std::log(lo);
    const double b = std::log(g.t_max);
    for (int i = 0; i < g.t_points; ++i) {
        ts.push_back(std::exp(a + (b - a) * i / (g.t_points - 1)));
    }
    return ts;
}

double radius_bound(Part part, double t, double s, const TestFnParams& p)
{
    switch (part) {
    case Part::XiLower:
    case Part::EtaLower:
        return p.R;
    case Part::EtaSlice:
        return ode::phi_of_t(p.m, s) + p.R;
    case Part::EtaDiagonal:
        return ode::phi_of_t(p.m, t) + p.R;
    }
    return p.R;
}

bool is_lower(Part part)
{
    return part != Part::EtaDiagonal;
}

} // namespace

Quadrature xi_q_eval(double x_norm, double t, double s, const TestFnParams& p, double rel_tol)
{
    return integrate_kernel(Kernel::Phi1, x_norm, t, s, p, rel_tol);
}

Quadrature eta_q_eval(double x_norm, double t, double s, const TestFnParams& p, double rel_tol)
{
    return integrate_kernel(Kernel::Phi2Ratio, x_norm, t, s, p, rel_tol);
}

const char* to_string(Part part)
{
    switch (part) {
    case Part::XiLower:
        return "i";
    case Part::EtaLower:
        return "i-eta";
    case Part::EtaSlice:
        return "ii";
    case Part::EtaDiagonal:
        return "iii";
    }
    return "?";
}

Part part_from_string(const std::string& name)
{
    if (name == "i") {
        return Part::XiLower;
    }
    if (name == "i-eta") {
        return Part::EtaLower;
    }
    if (name == "ii") {
        return Part::EtaSlice;
    }
    if (name == "iii") {
        return Part::EtaDiagonal;
    }
    throw ConfigError("unknown bound part '" + name + "' (expected i, i-eta, ii or iii)");
}

double envelope(Part part, double x_norm, double t, double s, const TestFnParams& p)
{
    const double m = p.m;
    const double phi_t = ode::phi_of_t(m, t);
    switch (part) {
    case Part::XiLower:
        return std::pow(bracket(phi_t), -m / (2.0 * (m + 2.0)));
    case Part::EtaLower:
        return std::pow(bracket(phi_t), -(m + 4.0) / (2.0 * (m + 2.0)));
    case Part::EtaSlice: {
        const double phi_s = ode::phi_of_t(m, s);
        return std::pow(bracket(t), -1.0 - m / 4.0) *
               std::pow(bracket(phi_s), -p.q - 1.0 + (m + 4.0) / (2.0 * (m + 2.0)));
    }
    case Part::EtaDiagonal:
        return std::pow(bracket(phi_t), -(p.n - 1.0) / 2.0) *
               std::pow(bracket(phi_t - x_norm), (p.n - 3.0) / 2.0 - p.q);
    }
    return 0.0;
}

bool admissible(Part part, double x_norm, double t, double s, const TestFnParams& p)
{
    if (!(x_norm >= 0.0) || !(s >= 0.0) || !(t >= s)) {
        return false;
    }
    switch (part) {
    case Part::XiLower:
    case Part::EtaLower:
        return s == 0.0 && x_norm <= p.R;
    case Part::EtaSlice:
        return s < t && x_norm <= ode::phi_of_t(p.m, s) + p.R;
    case Part::EtaDiagonal:
        return s == t && x_norm <= ode::phi_of_t(p.m, t) + p.R;
    }
    return false;
}

GridSpec GridSpec::refined() const
{
    GridSpec g = *this;
    g.t_points = std::max(2, 2 * t_points - 1);
    g.x_points = std::max(2, 2 * x_points - 1);
    g.s_points = std::max(2, 2 * s_points - 1);
    return g;
}

const PartSummary& BoundReport::summary(Part part) const
{
    for (const PartSummary& s : parts) {
        if (s.part == part) {
            return s;
        }
    }
    throw DomainError(std::string("bound report has no part ") + to_string(part));
}

BoundReport envelope_report(const TestFnParams& p, const std::vector<GridPoint>& points, const std::vector<Part>& parts)
{
    check_params(p);
    BoundReport rep;
    rep.params = p;
    for (Part part : parts) {
        PartSummary sum;
        sum.part = part;
        sum.lower = is_lower(part);
        sum.constant = sum.lower ? std::numeric_limits<double>::infinity() : 0.0;
        for (const GridPoint& g : points) {
            if (!admissible(part, g.x_norm, g.t, g.s, p)) {
                ++sum.excluded;
                continue;
            }
            BoundRow row;
            row.part = part;
            row.t = g.t;
            row.s = g.s;
            row.x_norm = g.x_norm;
            row.value = part == Part::XiLower ? xi_q(g.x_norm, g.t, g.s, p) : eta_q(g.x_norm, g.t, g.s, p);
            row.envelope = envelope(part, g.x_norm, g.t, g.s, p);
            row.ratio = row.value / row.envelope;
            sum.constant = sum.lower ? std::min(sum.constant, row.ratio) : std::max(sum.constant, row.ratio);
            ++sum.points;
            rep.rows.push_back(row);
        }
        if (sum.points == 0) {
            sum.constant = std::numeric_limits<double>::quiet_NaN();
        }
        sum.ok = sum.points > 0 && std::isfinite(sum.constant) && (!sum.lower || sum.constant > 0.0);
        rep.parts.push_back(sum);
    }
    return rep;
}

BoundReport envelope_report(const TestFnParams& p, const GridSpec& grid, const std::vector<Part>& parts)
{
    BoundReport rep;
    rep.params = p;
    const std::vector<double> ts = t_grid(grid);
    for (Part part : parts) {
        std::vector<GridPoint> pts;
        for (double t : ts) {
            std::vector<double> ss;
            if (part == Part::EtaSlice) {
                if (t == 0.0) {
                    continue;
                }
                for (double f : fractions(grid.s_points, 0.9)) {
                    ss.push_back(f * t);
                }
            } else if (part == Part::EtaDiagonal) {
                ss.push_back(t);
            } else {
                ss.push_back(0.0);
            }
            for (double s : ss) {
                for (double x : fractions(grid.x_points, radius_bound(part, t, s, p))) {
                    pts.push_back({t, s, x});
                }
            }
        }
        BoundReport one = envelope_report(p, pts, {part});
        rep.rows.insert(rep.rows.end(), one.rows.begin(), one.rows.end());
        rep.parts.push_back(one.parts.front());
    }
    return rep;
}

StabilityCheck refinement_check(const TestFnParams& p, const GridSpec& grid, Part part, double tol)
{
    StabilityCheck out;
    out.coarse = envelope_report(p, grid, {part}).parts.front();
    out.fine = envelope_report(p, grid.refined(), {part}).parts.front();
    out.relative_change = std::abs(out.fine.constant / out.coarse.constant - 1.0);
    out.stable = out.coarse.ok && out.fine.ok && out.relative_change < tol;
    return out;
}

} // namespace tricomi::testfun
