#include <doctest.h>

#include "tricomi/errors.hpp"
#include "tricomi/stats.hpp"

using namespace tricomi::stats;

TEST_SUITE("stats")
{
    TEST_CASE("exact line")
    {
        const LineFit f = ols({0, 1, 2, 3}, {1, 3, 5, 7});
        CHECK(f.slope == doctest::Approx(2.0));
        CHECK(f.intercept == doctest::Approx(1.0));
        CHECK(f.r_squared == doctest::Approx(1.0));
        CHECK(f.slope_stderr == doctest::Approx(0.0));
        CHECK(f.count == 4);
    }

    TEST_CASE("noisy line")
    {
        const LineFit f = ols({0, 1, 2, 3}, {0, 1.1, 1.9, 3.0});
        CHECK(f.slope == doctest::Approx(0.98));
        CHECK(f.slope_stderr > 0.0);
    }

    TEST_CASE("degenerate input")
    {
        CHECK_THROWS_AS(ols({1.0}, {2.0}), tricomi::FitError);
        CHECK_THROWS_AS(ols({1, 1, 1}, {1, 2, 3}), tricomi::FitError);
    }
}
