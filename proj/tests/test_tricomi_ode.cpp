#include <doctest.h>

#include "tricomi/errors.hpp"
#include "tricomi/tricomi_ode.hpp"

#include <cmath>

using namespace tricomi::ode;

namespace {

double rel(double a, double b)
{
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

} // namespace

TEST_SUITE("tricomi_ode")
{
    TEST_CASE("cone radius")
    {
        CHECK(rel(phi_of_t(1.0, 4.0), 2.0 / 3.0 * 8.0) < 1e-15);
        CHECK(phi_of_t(0.0, 2.5) == doctest::Approx(2.5));
        for (double m : {0.0, 0.5, 2.0}) {
            for (double t : {0.0, 0.3, 7.0}) {
                CHECK(phi_inverse(m, phi_of_t(m, t)) == doctest::Approx(t).epsilon(1e-13));
            }
        }
    }

    TEST_CASE("m = 0 reduces to cosh and sinh")
    {
        for (double lam : {0.2, 1.0, 3.0}) {
            for (double t : {0.0, 0.5, 2.0, 6.0}) {
                const FundamentalEval f = fundamental_pair({0.0, lam}, t);
                CHECK(rel(f.v1, std::cosh(lam * t)) < 1e-12);
                CHECK(std::abs(f.v2 - std::sinh(lam * t) / lam) <= 1e-12 * std::max(1.0, std::cosh(lam * t) / lam));
                CHECK(rel(f.dv1 + 1e-300, lam * std::sinh(lam * t) + 1e-300) < 1e-12);
            }
        }
    }

    TEST_CASE("initial values and Wronskian")
    {
        for (double m : {0.5, 1.0, 2.0, 4.0}) {
            const FundamentalEval f0 = fundamental_pair({m, 1.3}, 0.0);
            CHECK(f0.v1 == doctest::Approx(1.0));
            CHECK(f0.v2 == doctest::Approx(0.0));
            CHECK(f0.dv1 == doctest::Approx(0.0));
            CHECK(f0.dv2 == doctest::Approx(1.0));
            for (double t : {0.1, 0.9, 2.0, 3.5}) {
                const FundamentalEval f = fundamental_pair({m, 1.3}, t);
                CAPTURE(m);
                CAPTURE(t);
                CHECK(std::abs(f.wronskian() - 1.0) < 1e-9 * std::max(1.0, std::abs(f.v1 * f.dv2)));
            }
        }
    }

    TEST_CASE("agrees with the Runge-Kutta oracle")
    {
        for (double m : {0.5, 1.0, 2.0}) {
            for (double lam : {0.5, 1.5}) {
                for (double t : {0.3, 1.0, 4.0}) {
                    const OdeParams p{m, lam};
                    const FundamentalEval f = fundamental_pair(p, t);
                    const auto o1 = ode_oracle(p, t, {1.0, 0.0});
                    const auto o2 = ode_oracle(p, t, {0.0, 1.0});
                    CAPTURE(m);
                    CAPTURE(lam);
                    CAPTURE(t);
                    CHECK(rel(f.v1, o1.first) < 1e-8);
                    CHECK(rel(f.dv1, o1.second) < 1e-8);
                    CHECK(rel(f.v2, o2.first) < 1e-8);
                    CHECK(rel(f.dv2, o2.second) < 1e-8);
                }
            }
        }
    }

    TEST_CASE("two-point solutions")
    {
        for (double m : {0.0, 1.0, 2.5}) {
            const OdeParams p{m, 0.8};
            for (double s : {0.0, 0.4, 2.0}) {
                CHECK(phi1(s, s, p) == doctest::Approx(1.0));
                CHECK(phi2(s, s, p) == doctest::Approx(0.0));
                CHECK(phi2_ratio(s, s, p) == doctest::Approx(1.0));
                for (double dt : {1e-3, 0.5, 3.0}) {
                    const double t = s + dt;
                    // oracle started at s with the defining initial values
                    const auto o1 = ode_oracle(p, t, {1.0, 0.0}, 1e-11, s);
                    const auto o2 = ode_oracle(p, t, {0.0, 1.0}, 1e-11, s);
                    CAPTURE(m);
                    CAPTURE(s);
                    CAPTURE(t);
                    CHECK(rel(phi1(t, s, p), o1.first) < 1e-8);
                    CHECK(rel(phi2(t, s, p), o2.first) < 1e-8);
                    CHECK(rel(phi2_ratio(t, s, p), o2.first / dt) < 1e-8);
                    CHECK(rel(phi1(t, s, p), phi1_determinant(t, s, p)) < 1e-8);
                    CHECK(rel(phi2(t, s, p), phi2_determinant(t, s, p)) < 1e-8);
                }
            }
        }
    }

    TEST_CASE("phi2_ratio is continuous at s = t")
    {
        const OdeParams p{1.0, 2.0};
        const double s = 1.7;
        CHECK(phi2_ratio(s + 1e-9, s, p) == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(phi2_ratio(s + 2e-6, s, p) == doctest::Approx(phi2_ratio(s + 5e-7, s, p)).epsilon(1e-5));
    }

    TEST_CASE("scaled forms survive overflow")
    {
        const OdeParams p{1.0, 5.0};
        const double t = 100.0; // lambda phi(t) ~ 3333
        const Scaled s1 = phi1_scaled(t, 0.0, p);
        CHECK(std::isfinite(s1.mantissa));
        CHECK(s1.log_scale > 700.0);
        const GrowingSolution g = growing_solution(p, t);
        CHECK(g.log_scale == doctest::Approx(5.0 * phi_of_t(1.0, t)));
        CHECK(std::isfinite(g.g));
    }

    TEST_CASE("decay integral: closed form against quadrature")
    {
        for (double m : {0.0, 1.0, 2.0}) {
            for (double s : {0.0, 0.5, 2.0}) {
                for (double t : {0.6, 3.0, 10.0}) {
                    if (t <= s) {
                        continue;
                    }
                    const OdeParams p{m, 0.7};
                    CAPTURE(m);
                    CAPTURE(s);
                    CAPTURE(t);
                    CHECK(rel(decay_integral_closed(t, s, p), decay_integral_quadrature(t, s, p)) < 1e-10);
                }
            }
        }
    }

    TEST_CASE("domain errors")
    {
        CHECK_THROWS_AS(fundamental_pair({-1.0, 1.0}, 1.0), tricomi::DomainError);
        CHECK_THROWS_AS(fundamental_pair({1.0, 0.0}, 1.0), tricomi::DomainError);
        CHECK_THROWS_AS(fundamental_pair({1.0, 1.0}, -0.5), tricomi::DomainError);
        CHECK_THROWS_AS(phi1(1.0, 2.0, {1.0, 1.0}), tricomi::DomainError);
    }
}
