#include "agedelay/errors.hpp"
#include "agedelay/spectral.hpp"

#include "gen.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace agedelay;

namespace
{

AgeRates benchmark(double d = 0.0)
{
    return AgeRates(RateProfile::constant(0.5), RateProfile::constant(d), ModelParams{1.0, 2.0, 2.0});
}

} // namespace

TEST_CASE("gamma0 values")
{
    const CharacteristicFunction cf(benchmark());
    CHECK(cf.gamma0(0.0) == doctest::Approx(cf.rates().kstar()).epsilon(1e-15));
    const double ref = oracle::gamma0_no_death(1.0, 1.0, 2.0);
    CHECK(ref == doctest::Approx(0.2325442).epsilon(1e-7));
    CHECK(std::abs(cf.gamma0(1.0) - ref) < 1e-14);
    CHECK(cf.gamma0(10.0) <= std::exp(-10.0) * cf.rates().kstar());
    CHECK(cf.gamma0_relative_self_check(3.0) <= 1e-11);
    CHECK_THROWS_AS(cf.gamma0(400.0), RangeError);
}

TEST_CASE("principal eigenvalue")
{
    const CharacteristicFunction cf(benchmark());
    CHECK(std::abs(cf.principal_eigenvalue(1.0)) < 1e-12);

    const double lam = cf.principal_eigenvalue(2.5);
    const double oracle_lam =
        oracle::bisect_decreasing([](double l) { return 2.5 * oracle::gamma0_no_death(l, 1, 2) - 1.0; }, 0.0, 5.0);
    CHECK(std::abs(2.5 * oracle::gamma0_no_death(lam, 1, 2) - 1.0) < 1e-10);
    CHECK(lam == doctest::Approx(oracle_lam).epsilon(1e-12));
    CHECK(lam > 0.0);
    CHECK(cf.principal_eigenvalue(0.8) < 0.0);
}

TEST_CASE("classification")
{
    const CharacteristicFunction cf(benchmark());
    CHECK(cf.classify(0.8) == StabilityClass::extinction);
    CHECK(cf.classify(2.5) == StabilityClass::persistence);
    CHECK(cf.classify(1.0) == StabilityClass::critical);
    CHECK(to_string(StabilityClass::persistence) == "persistence");
}

TEST_CASE("property: monotone, bracketed, sign-consistent")
{
    Gen gen(13);
    for (int trial = 0; trial < 20; ++trial)
    {
        const auto rates = AgeRates(RateProfile::constant(gen.uniform(0.1, 1)),
                                    RateProfile::piecewise_constant({gen.uniform(0, 1), gen.uniform(0, 1)}, {1.2}),
                                    ModelParams{gen.uniform(0.3, 1.0), 2.0, 2.0});
        const CharacteristicFunction cf(rates);
        const double k = rates.kstar();
        double prev = INFINITY;
        for (int i = 0; i < 50; ++i)
        {
            const double lam = -5.0 + 10.0 * i / 49.0;
            const double g = cf.gamma0(lam);
            CHECK(g < prev);
            prev = g;
            const double upper = std::exp(-lam * (lam >= 0 ? rates.r() : rates.life_span())) * k;
            const double lower = std::exp(-lam * (lam >= 0 ? rates.life_span() : rates.r())) * k;
            CHECK(g <= upper * (1 + 1e-13));
            CHECK(g >= lower * (1 - 1e-13));
        }
        for (double pk : {0.5, 0.9, 1.1, 2.0, 5.0})
        {
            const double lam = cf.principal_eigenvalue(pk / k);
            CHECK((lam > 0) == (pk > 1));
            CHECK(std::abs(pk / k * cf.gamma0(lam) - 1.0) < 1e-10);
        }
    }
}
