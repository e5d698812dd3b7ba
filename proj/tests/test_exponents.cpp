#include <doctest.h>

#include "tricomi/errors.hpp"
#include "tricomi/exponents.hpp"

#include <cmath>
#include <random>

using namespace tricomi::exponents;

TEST_SUITE("exponents")
{
    TEST_CASE("gamma polynomial")
    {
        // m = 0, n = 3: gamma = -2 p^2 + 2 p ... check one value by hand
        const ExponentContext c{0.0, 3, 2.0};
        const double expected = -(3.0 - 1.0) * 4.0 - (2.0 * (1.0 - 1.5) - 3.0) * 2.0 + 2.0;
        CHECK(gamma_mnp(c) == doctest::Approx(expected));
        CHECK(gamma_mnp({1.0, 1, 2.0}) == doctest::Approx(4.0));
    }

    TEST_CASE("critical exponent")
    {
        CHECK(std::abs(p_crit(0.0, 3) - (1.0 + std::sqrt(2.0))) < 1e-14);
        for (int n : {2, 3, 4}) {
            CHECK(p_crit(0.0, n) == doctest::Approx(strauss_exponent(n)).epsilon(1e-13));
        }
        for (double m : {0.0, 0.5, 1.0, 2.0, 4.0}) {
            for (int n : {2, 3, 4}) {
                CHECK(std::abs(gamma_mnp({m, n, p_crit(m, n)})) < 1e-12);
            }
        }
        CHECK_THROWS_AS(p_crit(0.0, 1), tricomi::DomainError);
        CHECK_THROWS_AS(p_crit(-1.0, 2), tricomi::DomainError);
        CHECK_THROWS_AS(strauss_exponent(1), tricomi::DomainError);
    }

    TEST_CASE("iteration exponents satisfy beta - alpha = gamma / (2(p-1))")
    {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> um(0.0, 4.0);
        std::uniform_real_distribution<double> up(1.05, 5.0);
        for (int i = 0; i < 200; ++i) {
            const ExponentContext c{um(rng), 1 + static_cast<int>(rng() % 4), up(rng)};
            const IterationExponents e = iteration_exponents(c);
            CHECK(std::abs(e.beta_it - e.alpha_it - gamma_mnp(c) / (2.0 * (c.p - 1.0))) < 1e-12);
        }
    }

    TEST_CASE("critical identities vanish at the root only")
    {
        for (double m : {0.0, 1.0, 3.0}) {
            for (int n : {2, 3}) {
                const double p = p_crit(m, n);
                const CriticalResiduals r = critical_identities({m, n, p});
                CHECK(std::abs(r.frame) < 1e-12);
                CHECK(std::abs(r.initiate) < 1e-12);
                const CriticalResiduals off = critical_identities({m, n, p + 0.3});
                CHECK(std::abs(off.frame) > 1e-3);
            }
        }
    }

    TEST_CASE("classification and lifespan laws")
    {
        const double pc = p_crit(1.0, 2);
        CHECK(classify({1.0, 2, pc - 0.1}) == Regime::Subcritical);
        CHECK(classify({1.0, 2, pc}) == Regime::Critical);
        CHECK(classify({1.0, 2, pc + 0.1}) == Regime::Supercritical);
        CHECK(classify({1.0, 1, 50.0}) == Regime::Supercritical);
        CHECK(classify({0.0, 1, 50.0}) == Regime::Subcritical); // gamma = 2 + 2p > 0
        CHECK(subcritical_lifespan_exponent({1.0, 1, 2.0}) == doctest::Approx(1.0));
        CHECK(lifespan_prediction({1.0, 1, 2.0}, 0.5, 3.0) == doctest::Approx(6.0));
        CHECK(lifespan_prediction({1.0, 2, pc}, 0.5, 1.0) ==
              doctest::Approx(std::exp(std::pow(0.5, -pc * (pc - 1.0)))));
        CHECK_THROWS_AS(lifespan_prediction({1.0, 2, pc + 0.5}, 0.5, 1.0), tricomi::ScopeError);
    }

    TEST_CASE("frame q")
    {
        CHECK(frame_q({1.0, 3, 2.0}) == doctest::Approx(0.5));
        CHECK(frame_q({0.0, 1, 4.0}) == doctest::Approx(-0.25));
    }
}
