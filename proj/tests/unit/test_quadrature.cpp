#include "agedelay/quadrature.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace agedelay;

TEST_CASE("gauss-legendre integrates polynomials up to degree 2n-1 exactly")
{
    for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 16u})
    {
        const auto rule = gauss_legendre(n);
        CHECK(rule.size() == n);
        for (std::size_t k = 0; k < 2 * n; ++k)
        {
            const double exact = k % 2 ? 0.0 : 2.0 / static_cast<double>(k + 1);
            const double got = rule.integrate([k](double x) { return std::pow(x, static_cast<double>(k)); });
            CHECK(got == doctest::Approx(exact).epsilon(1e-14));
        }
    }
}

TEST_CASE("gauss-legendre nodes ascend and weights are positive")
{
    const auto rule = gauss_legendre(12);
    for (std::size_t i = 0; i < rule.size(); ++i)
    {
        CHECK(rule.weights[i] > 0.0);
        if (i > 0)
            CHECK(rule.nodes[i] > rule.nodes[i - 1]);
    }
}

TEST_CASE("composite rule respects breaks and panel width")
{
    const std::vector<double> breaks{0.0, 0.3, 2.0};
    const auto rule = composite_gauss_legendre(breaks, 0.5, 8);
    double wsum = 0.0;
    for (double w : rule.weights)
        wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    // A kink at 0.3 is integrated exactly when it is a break.
    auto kinked = [](double a) { return a < 0.3 ? 1.0 : 1.0 + (a - 0.3); };
    const double exact = 2.0 + 0.5 * 1.7 * 1.7;
    CHECK(rule.integrate(kinked) == doctest::Approx(exact).epsilon(1e-14));
}

TEST_CASE("composite rule matches a Simpson oracle on a smooth integrand")
{
    auto f = [](double a) { return std::exp(-0.7 * a) * std::cos(3.0 * a); };
    const auto rule = composite_gauss_legendre(1.0, 2.0, 4, 8);
    CHECK(rule.integrate(f) == doctest::Approx(oracle::simpson(f, 1.0, 2.0)).epsilon(1e-12));
}

TEST_CASE("trapezoid is exact for cosine modes on [0, pi]")
{
    const auto rule = trapezoid(0.0, std::numbers::pi, 32);
    CHECK(rule.size() == 33);
    for (int n = 1; n < 32; ++n)
        CHECK(std::abs(rule.integrate([n](double y) { return std::cos(n * y); })) < 1e-14);
    CHECK(rule.integrate([](double) { return 1.0; }) == doctest::Approx(std::numbers::pi).epsilon(1e-15));
}
