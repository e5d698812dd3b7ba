#include <doctest.h>

#include "tricomi/errors.hpp"
#include "tricomi/iteration.hpp"

#include <cmath>

using namespace tricomi::iteration;
using tricomi::exponents::ExponentContext;

namespace {

double rel(double a, double b)
{
    return std::abs(a - b) / std::max(1.0, std::abs(b));
}

ExponentContext critical_ctx(double m, int n)
{
    return {m, n, tricomi::exponents::p_crit(m, n)};
}

} // namespace

TEST_SUITE("iteration")
{
    TEST_CASE("subcritical closed forms match the recursions")
    {
        for (ExponentContext c : {ExponentContext{1, 1, 2}, ExponentContext{0, 3, 2}, ExponentContext{2, 2, 1.5}}) {
            const SubcriticalSequences s = subcritical_run(c, 1e-3, 1.0, 40);
            REQUIRE(s.size() == 40);
            for (int k = 0; k < s.size(); ++k) {
                CHECK(rel(s.a[k], s.a_closed[k]) < 1e-12);
                CHECK(rel(s.b[k], s.b_closed[k]) < 1e-12);
                CHECK(rel(s.log_D_lower[k], s.log_D_lower_closed[k]) < 1e-12);
            }
            CHECK(s.a[0] == doctest::Approx(s.exps.a1));
            CHECK(s.b[0] == doctest::Approx(s.exps.b1));
        }
    }

    TEST_CASE("exact denominators dominate the lower recursion")
    {
        const SubcriticalSequences s = subcritical_run({1, 1, 2}, 1e-2, 1.0, 40);
        for (int k = 0; k < s.size(); ++k) {
            CHECK(s.log_D[k] >= s.log_D_lower[k] - 1e-9 * std::abs(s.log_D_lower[k]));
        }
    }

    TEST_CASE("geometric bound holds when C3 <= 1")
    {
        const SubcriticalSequences s = subcritical_run({1, 1, 2}, 1e-2, 1.0, 40, 1.0);
        REQUIRE(s.log_C3 <= 0.0);
        for (int k = 0; k < s.size(); ++k) {
            CHECK(s.log_D_lower[k] >= s.log_D_bound[k] - 1e-9 * std::abs(s.log_D_bound[k]));
        }
    }

    TEST_CASE("J function and threshold")
    {
        const SubcriticalSequences s = subcritical_run({1, 1, 2}, 0.01, 1.0, 40);
        CHECK_THROWS_AS(j_function(1.0, s), tricomi::DomainError);
        const double closed = j_threshold_closed_form(s);
        const double first = j_first_crossing(s, 1.0, 1e12);
        CHECK(first <= closed);
        CHECK(j_function(closed, s) > 1.0);
        CHECK(j_function(first * 1.0001, s) > 1.0);
        const ThresholdCrossing c = subcritical_threshold(s, 700.0);
        REQUIRE(c.found);
        CHECK(log_lower_bound(s, c.j, c.t) == doctest::Approx(700.0).epsilon(1e-6));
    }

    TEST_CASE("blowup estimate follows the subcritical law")
    {
        const ExponentContext c{1, 1, 2};
        const BlowupEstimate a = blowup_time_estimate(c, 0.01, 1.0, 1.0);
        const BlowupEstimate b = blowup_time_estimate(c, 0.001, 1.0, 1.0);
        CHECK(a.exponent == doctest::Approx(1.0));
        CHECK(b.bound / a.bound == doctest::Approx(10.0).epsilon(0.01));
    }

    TEST_CASE("scope checks")
    {
        CHECK_THROWS_AS(subcritical_run(critical_ctx(1, 2), 1.0, 1.0, 10), tricomi::ScopeError);
        CHECK_THROWS_AS(critical_run({1, 1, 2}, 0.1, {}, 10), tricomi::ScopeError);
        CHECK_THROWS_AS(subcritical_run({1, 1, 2}, -1.0, 1.0, 10), tricomi::DomainError);
        CHECK_THROWS_AS(subcritical_run({1, 1, 2}, 1.0, 1.0, kMaxIterations + 1), tricomi::DomainError);
    }

    TEST_CASE("critical closed forms match the recursions")
    {
        for (auto [m, n] : {std::pair<double, int>{0, 3}, {1, 2}, {1, 3}, {2, 2}}) {
            const CriticalSequences s = critical_run(critical_ctx(m, n), 0.05, {}, 40);
            REQUIRE(s.size() == 41);
            for (int j = 0; j < s.size(); ++j) {
                CHECK(rel(s.a[j], s.a_rec[j]) < 1e-12);
                CHECK(rel(s.b[j], s.b_rec[j]) < 1e-12);
                if (j >= 1) {
                    CHECK(rel(s.log_C[j], s.log_C_rec[j]) < 1e-12);
                }
            }
            CHECK(s.l[0] == 1.5);
            CHECK(s.l[40] < 2.0);
        }
    }

    TEST_CASE("critical N prefactor is configurable")
    {
        CriticalConstants k;
        const CriticalSequences a = critical_run(critical_ctx(1, 2), 0.1, k, 5);
        k.N_denominator = 63.0 * (a.ctx.p + 1.0);
        const CriticalSequences b = critical_run(critical_ctx(1, 2), 0.1, k, 5);
        CHECK(a.log_N == doctest::Approx(b.log_N));
        k.N_denominator = std::pow(3.0, 27.0) * (a.ctx.p + 1.0);
        const CriticalSequences c = critical_run(critical_ctx(1, 2), 0.1, k, 5);
        CHECK(c.log_N < a.log_N - 20.0);
    }

    TEST_CASE("slicing bounds")
    {
        const CriticalSequences s = critical_run(critical_ctx(1, 2), 0.1, {}, 20);
        CHECK(std::isinf(log_slicing_bound(s, 3, std::log(1.0))));
        CHECK(std::isfinite(log_slicing_bound(s, 3, std::log(10.0))));
        const ThresholdCrossing c = critical_threshold(s, 50.0);
        REQUIRE(c.found);
        CHECK(log_slicing_bound(s, c.j, c.log_t) == doctest::Approx(50.0).epsilon(1e-6));
        CHECK(log_initiation_bound(s, 3.0) == doctest::Approx(std::log(s.M * std::pow(0.1, s.ctx.p) * std::log(2.0))));
    }

    TEST_CASE("constant-free scaling slopes")
    {
        std::vector<double> eps;
        for (int k = 4; k <= 12; ++k) {
            eps.push_back(std::ldexp(1.0, -k));
        }
        for (ExponentContext c : {ExponentContext{1, 1, 2}, ExponentContext{0, 3, 2}, ExponentContext{1, 2, 2}}) {
            const ScalingExtraction ex = subcritical_scaling(c, eps);
            CHECK(std::abs(ex.slope / ex.theory_slope - 1.0) < 0.05);
        }
        for (auto [m, n] : {std::pair<double, int>{0, 3}, {1, 2}, {2, 2}}) {
            const ScalingExtraction ex = critical_scaling(critical_ctx(m, n), eps);
            CHECK(std::abs(ex.slope / ex.theory_slope - 1.0) < 0.05);
        }
    }
}
