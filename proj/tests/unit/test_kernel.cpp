#include "agedelay/errors.hpp"
#include "agedelay/kernel.hpp"

#include "gen.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace agedelay;

namespace
{

constexpr double pi = std::numbers::pi;

/// Rates with alpha(r) = D r; with r = 1 alpha(r) = D.
AgeRates rates_with(double D, double d = 0.0)
{
    return AgeRates(RateProfile::constant(D), RateProfile::constant(d), ModelParams{1.0, 2.0, 2.0});
}

} // namespace

TEST_CASE("series against long-double oracles")
{
    Gen gen(3);
    for (int i = 0; i < 200; ++i)
    {
        const double alpha = gen.log_uniform(0.01, 5.0);
        const double x = gen.uniform(0, pi), y = gen.uniform(0, pi);
        const double ref = oracle::neumann_images(alpha, x, y);
        CHECK(std::abs(neumann_heat_images(alpha, x, y) - ref) < 1e-13 * std::max(1.0, ref));
        if (alpha >= 0.05)
            CHECK(std::abs(neumann_heat_spectral(alpha, x, y) - oracle::neumann_cosine(alpha, x, y)) < 1e-13);
    }
}

TEST_CASE("large diffusion time collapses to the mean")
{
    const KernelEvaluator k(rates_with(50.0, 0.3));
    const double beta = std::exp(-0.3);
    CHECK(std::abs(k.eval_spectral(1.0, 0.4, 2.9) - beta / pi) < 1e-15);
    CHECK(std::abs(k.eval(1.0, 0.4, 2.9) - beta / pi) < 1e-15);
}

TEST_CASE("spectral and image forms agree")
{
    const KernelEvaluator k(rates_with(0.3));
    CHECK(std::abs(k.eval_spectral(1.0, 0.0, 0.0) - k.eval_images(1.0, 0.0, 0.0)) < 1e-10);
    Gen gen(5);
    for (int i = 0; i < 50; ++i)
    {
        const double x = gen.uniform(0, pi), y = gen.uniform(0, pi), a = gen.uniform(1, 2);
        CHECK(std::abs(k.eval_spectral(a, x, y) - k.eval_images(a, x, y)) < 1e-10);
        CHECK(std::abs(k.eval(a, x, y) - k.eval(a, y, x)) < 1e-12);
    }
}

TEST_CASE("crossover continuity")
{
    for (double alpha : {0.1 - 1e-6, 0.1 + 1e-6})
    {
        const KernelEvaluator k(rates_with(alpha));
        for (double x : {0.0, 1.0, pi})
            for (double y : {0.0, 0.5, 2.0, pi})
                CHECK(std::abs(k.eval_spectral(1.0, x, y) - k.eval_images(1.0, x, y)) < 1e-10);
    }
}

TEST_CASE("small diffusion time decays away from the diagonal")
{
    const KernelEvaluator k(rates_with(0.01));
    CHECK(k.eval_images(1.0, pi / 2, 0.0) < 1e-3);
    CHECK(k.eval(1.0, pi / 2, 0.0) > 0.0);
}

TEST_CASE("y-integral is beta and full mass is kstar")
{
    const auto rates = rates_with(0.5, 0.1);
    const KernelEvaluator k(rates);
    for (double a : {1.0, 1.37, 2.0})
        for (double x : {0.0, 0.9, pi})
        {
            const double mass = oracle::simpson([&](double y) { return k.eval_images(a, x, y); }, 0.0, pi, 4000);
            CHECK(std::abs(mass - rates.beta(a)) < 1e-8);
        }
    for (double x : {0.0, 2.2})
    {
        const double full = oracle::simpson(
            [&](double a) { return oracle::simpson([&](double y) { return k.eval(a, x, y); }, 0.0, pi, 400); },
            1.0, 2.0, 200);
        CHECK(std::abs(full - rates.kstar()) < 1e-8);
    }
}

TEST_CASE("tabulate")
{
    const auto rates = rates_with(0.5, 0.1);
    const KernelEvaluator k(rates);
    const std::vector<double> one_a{1.5}, one_x{0.3};
    const auto single = k.tabulate(one_a, one_x, one_x);
    CHECK(single(0, 0, 0) == k.eval(1.5, 0.3, 0.3));

    const auto trap = trapezoid(0.0, pi, 32);
    const std::vector<double> ages{1.0, 1.25, 1.5, 2.0};
    const auto table = k.tabulate(ages, trap.nodes, trap.nodes);
    for (std::size_t ia = 0; ia < ages.size(); ++ia)
        for (std::size_t ix = 0; ix < trap.size(); ++ix)
        {
            double s = 0.0;
            for (std::size_t iy = 0; iy < trap.size(); ++iy)
            {
                CHECK(table(ia, ix, iy) > 0.0);
                CHECK(std::abs(table(ia, ix, iy) - table(ia, iy, ix)) < 1e-12);
                s += trap.weights[iy] * table(ia, ix, iy);
            }
            CHECK(std::abs(s - rates.beta(ages[ia])) < 1e-8);
        }

    KernelOptions tiny;
    tiny.memory_cap_bytes = 1024;
    const KernelEvaluator capped(rates, tiny);
    CHECK_THROWS_AS(capped.tabulate(ages, trap.nodes, trap.nodes), ResourceError);
}

TEST_CASE("errors")
{
    const KernelEvaluator k(rates_with(0.5));
    CHECK_THROWS_AS(k.eval(0.5, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(k.eval(1.5, -0.1, 0.0), DomainError);
    CHECK_THROWS_AS(k.eval(1.5, 0.0, 3.2), DomainError);
    KernelOptions few;
    few.max_terms = 5;
    const KernelEvaluator short_series(rates_with(0.001), few);
    CHECK_THROWS_AS(short_series.eval_spectral(1.0, 0.0, 0.0), AccuracyError);
    CHECK_THROWS_AS(neumann_heat_images(0.0, 0.0, 0.0), DomainError);
}
