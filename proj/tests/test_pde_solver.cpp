#include <doctest.h>

#include "tricomi/errors.hpp"
#include "tricomi/pde_solver.hpp"
#include "tricomi/tricomi_ode.hpp"

#include <cmath>

using namespace tricomi;
using namespace tricomi::pde;

namespace {

double smooth(double r)
{
    return profile_value(Profile::Smooth, std::abs(r), 1.0);
}

// d'Alembert solution of the linear m = 0 problem with u1 = 0
double wave_exact(int n, double r, double t)
{
    if (n == 1) {
        return 0.5 * (smooth(r - t) + smooth(r + t));
    }
    return ((r - t) * smooth(r - t) + (r + t) * smooth(r + t)) / (2.0 * r);
}

double linear_error(int n, double dx)
{
    RunConfig c;
    c.model = {0.0, n, 2.0, 1.0, 1.0};
    c.dx = dx;
    c.t_max = 1.5;
    c.nonlinear = false;
    c.u1_scale = 0.0;
    c.profile = Profile::Smooth;
    SolverState s = initialize(c);
    while (s.t < c.t_max) {
        step(s, c);
    }
    double e = 0.0;
    for (size_t i = 1; i < s.u.size(); ++i) {
        e = std::max(e, std::abs(s.u[i] - wave_exact(n, s.grid->r[i], s.t)));
    }
    return e;
}

} // namespace

TEST_SUITE("pde_solver")
{
    TEST_CASE("profiles")
    {
        CHECK(profile_value(Profile::Bump4, 0.0, 1.0) == 1.0);
        CHECK(profile_value(Profile::Bump4, 1.0, 1.0) == 0.0);
        CHECK(profile_value(Profile::Smooth, 0.0, 1.0) == doctest::Approx(1.0));
        CHECK(profile_value(Profile::Smooth, 1.2, 1.0) == 0.0);
        CHECK(profile_from_string(to_string(Profile::Smooth)) == Profile::Smooth);
        CHECK_THROWS_AS(profile_from_string("gaussian"), ConfigError);
    }

    TEST_CASE("configuration checks")
    {
        RunConfig c;
        c.dx = 0.0;
        CHECK_THROWS_AS(validate(c), ConfigError);
        c = RunConfig{};
        c.model.n = 4;
        CHECK_THROWS_AS(validate(c), ConfigError);
        c = RunConfig{};
        c.model.p = 1.0;
        CHECK_THROWS_AS(validate(c), ConfigError);
        c = RunConfig{};
        c.domain_radius = 0.5;
        CHECK_THROWS_AS(initialize(c), ConfigError);
        c = RunConfig{};
        CHECK(resolved_domain_radius(c) > c.model.R + ode::phi_of_t(c.model.m, c.t_max));
        CHECK(resolved_support_tol(c) == doctest::Approx(c.dx * c.dx));
    }

    TEST_CASE("zero data stays exactly zero")
    {
        RunConfig c;
        c.model.eps = 0.0;
        c.t_max = 2.0;
        SolverState s = initialize(c);
        for (int k = 0; k < 200 && s.t < c.t_max; ++k) {
            step(s, c);
        }
        for (double v : s.u) {
            REQUIRE(v == 0.0);
        }
        CHECK(functional_G(s) == 0.0);
        CHECK(support_radius(s, 1e-6) == 0.0);
    }

    TEST_CASE("finite propagation speed")
    {
        for (int n : {1, 2, 3}) {
            RunConfig c;
            c.model.n = n;
            c.model.eps = 0.5;
            c.dx = 4e-3;
            c.t_max = 3.0;
            const RunResult r = run_until_blowup(c);
            CAPTURE(n);
            CHECK(r.max_support_excess <= 2.0 * c.dx);
        }
    }

    TEST_CASE("step size respects the origin cell")
    {
        // spectral limits of the radial operator: 1, 0.90891, 0.79263 dx
        const double expected[] = {1.0, 0.90891, 0.79263};
        for (int n : {1, 2, 3}) {
            RunConfig c;
            c.model = {0.0, n, 2.0, 1.0, 1.0};
            c.dx = 4e-3;
            c.cfl = 0.95;
            c.t_max = 20.0;
            c.nonlinear = false;
            const SolverState s = initialize(c);
            CAPTURE(n);
            CHECK(s.grid->stable_dx / c.dx == doctest::Approx(expected[n - 1]).epsilon(1e-4));
            CHECK(next_dt(s, c) <= 0.98 * s.grid->stable_dx + 1e-15);
            const RunResult r = run_until_blowup(c);
            CHECK(r.record.censored);
            CHECK(r.record.peak < 10.0); // an unstable step reaches 1e8 within ~100 steps
        }
    }

    TEST_CASE("G'' equals the integral of |u|^p")
    {
        RunConfig c;
        c.model = {1.0, 3, 2.0, 1.0, 2.0};
        c.dx = 4e-3;
        c.t_max = 2.0;
        const RunResult r = run_until_blowup(c);
        double max_rel = 0.0;
        const auto& s = r.series;
        for (size_t k = 2; k + 1 < s.size(); ++k) {
            const double h0 = s[k].t - s[k - 1].t;
            const double h1 = s[k + 1].t - s[k].t;
            const double g2 = 2.0 * ((s[k + 1].G - s[k].G) / h1 - (s[k].G - s[k - 1].G) / h0) / (h0 + h1);
            max_rel = std::max(max_rel, std::abs(g2 - s[k].Lp) / s[k].Lp);
        }
        CHECK(max_rel < 0.02);
    }

    TEST_CASE("linear wave converges at second order")
    {
        for (int n : {1, 3}) {
            const double e1 = linear_error(n, 4e-3);
            const double e2 = linear_error(n, 2e-3);
            CAPTURE(n);
            CHECK(std::log2(e1 / e2) >= 1.8);
        }
    }

    TEST_CASE("blow-up is detected and refined")
    {
        RunConfig c;
        c.dx = 4e-3;
        c.model.eps = 1.2;
        c.u1_scale = 0.0;
        const RunResult r = run_until_blowup(c);
        CHECK(!r.record.censored);
        CHECK(r.record.threshold_consistent);
        CHECK(r.record.T_confirm < r.record.T_blowup);
        CHECK(r.record.peak >= c.blowup_threshold);
        RunConfig d = c;
        d.t_max = 1.0;
        const RunResult cen = run_until_blowup(d);
        CHECK(cen.record.censored);
        CHECK(std::isnan(cen.record.T_blowup));
        CHECK(cen.record.t_end == doctest::Approx(1.0));
    }

    TEST_CASE("F is sampled on request")
    {
        RunConfig c;
        c.model = {1.0, 3, 2.0, 1.0, 0.3};
        c.dx = 8e-3;
        c.t_max = 1.0;
        c.f_interval = 0.25;
        const RunResult r = run_until_blowup(c);
        int sampled = 0;
        for (const SeriesRow& row : r.series) {
            if (!std::isnan(row.F)) {
                ++sampled;
                CHECK(row.F > 0.0);
            }
        }
        CHECK(sampled >= 4);
    }
}
