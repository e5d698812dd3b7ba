#include <doctest.h>

#include "tricomi/errors.hpp"
#include "tricomi/exponents.hpp"
#include "tricomi/testfun.hpp"

#include <cmath>

using namespace tricomi::testfun;

TEST_SUITE("testfun")
{
    TEST_CASE("closed-form values at t = 0")
    {
        // n = 3, x = 0: varphi = 4 pi, xi = 4 pi int_0^1 e^{-lambda} = 4 pi (1 - 1/e)
        const TestFnParams p{0.0, 1.0, 1.0, 3, 1.0};
        CHECK(xi_q(0.0, 0.0, 0.0, p) == doctest::Approx(4.0 * M_PI * (1.0 - std::exp(-1.0))).epsilon(1e-10));
        // n = 1, q = 1: 2 int_0^{l} lambda e^{-lambda R}
        const TestFnParams p1{1.0, 0.5, 2.0, 1, 2.0};
        const double l = 0.5;
        const double R = 2.0;
        const double exact = 2.0 * (1.0 - std::exp(-l * R) * (1.0 + l * R)) / (R * R);
        CHECK(xi_q(0.0, 0.0, 0.0, p1) == doctest::Approx(exact).epsilon(1e-10));
    }

    TEST_CASE("diagonal of eta equals xi")
    {
        const TestFnParams p{0.3, 0.5, 1.0, 2, 1.0};
        for (double t : {0.5, 4.0, 60.0}) {
            CHECK(eta_q(0.7, t, t, p) == doctest::Approx(xi_q(0.7, t, t, p)).epsilon(1e-9));
        }
    }

    TEST_CASE("negative q uses the substitution")
    {
        const TestFnParams p{-0.5, 0.5, 1.0, 3, 0.0};
        // m = 0, x = 0, t = s = 0: 4 pi int_0^{1/2} e^{-lambda} lambda^{-1/2}
        const double exact = 4.0 * M_PI * std::sqrt(M_PI) * std::erf(std::sqrt(0.5));
        CHECK(xi_q(0.0, 0.0, 0.0, p) == doctest::Approx(exact).epsilon(1e-9));
        CHECK_THROWS_AS(xi_q(0.0, 1.0, 0.0, TestFnParams{-1.0, 0.5, 1.0, 3, 1.0}), tricomi::DomainError);
    }

    TEST_CASE("quadrature error estimate is reported")
    {
        const Quadrature q = eta_q_eval(0.4, 10.0, 3.0, TestFnParams{0.5, 0.5, 1.0, 3, 1.0});
        CHECK(q.value > 0.0);
        CHECK(q.abs_error <= 1e-8 * q.value);
    }

    TEST_CASE("part names")
    {
        for (Part part : {Part::XiLower, Part::EtaLower, Part::EtaSlice, Part::EtaDiagonal}) {
            CHECK(part_from_string(to_string(part)) == part);
        }
        CHECK_THROWS_AS(part_from_string("iv"), tricomi::ConfigError);
    }

    TEST_CASE("envelope report on a small grid")
    {
        const TestFnParams p{tricomi::exponents::frame_q({1.0, 3, tricomi::exponents::p_crit(1.0, 3)}), 0.5, 1.0, 3,
                             1.0};
        GridSpec g;
        g.t_points = 5;
        g.t_max = 100.0;
        const BoundReport r = envelope_report(p, g, {Part::XiLower, Part::EtaSlice, Part::EtaDiagonal});
        REQUIRE(r.parts.size() == 3);
        CHECK(r.summary(Part::XiLower).lower);
        CHECK(r.summary(Part::XiLower).ok);
        CHECK(r.summary(Part::XiLower).constant > 0.0);
        CHECK(!r.summary(Part::EtaDiagonal).lower);
        CHECK(std::isfinite(r.summary(Part::EtaDiagonal).constant));
        for (const BoundRow& row : r.rows) {
            CHECK(row.value > 0.0);
            CHECK(row.ratio == doctest::Approx(row.value / row.envelope));
            CHECK(admissible(row.part, row.x_norm, row.t, row.s, p));
        }
        const StabilityCheck st = refinement_check(p, g, Part::EtaSlice);
        CHECK(st.stable);
    }

    TEST_CASE("explicit points")
    {
        const TestFnParams p{0.5, 0.5, 1.0, 3, 1.0};
        const BoundReport r = envelope_report(p, std::vector<GridPoint>{{1.0, 0.0, 0.5}, {10.0, 0.0, 1.0}},
                                             {Part::XiLower});
        CHECK(r.rows.size() == 2);
    }

    TEST_CASE("refined grid")
    {
        const GridSpec g;
        const GridSpec f = g.refined();
        CHECK(f.t_points == 2 * g.t_points - 1);
        CHECK(f.x_points == 2 * g.x_points - 1);
        CHECK(f.s_points == 2 * g.s_points - 1);
    }
}
