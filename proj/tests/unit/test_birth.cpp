#include "agedelay/birth.hpp"
#include "agedelay/errors.hpp"

#include "gen.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace agedelay;

TEST_CASE("eval by formula")
{
    CHECK(BirthFunction::ricker(2, 1, 1)(0.0) == 0.0);
    CHECK(BirthFunction::logistic(2, 1)(0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(BirthFunction::beverton_holt(2, 1, 2)(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(BirthFunction::logistic(2, 1)(1.5) < 0.0);
    CHECK(BirthFunction::linear(3)(2.0) == 6.0);
    CHECK_THROWS_AS(BirthFunction::ricker(2, 1, 1)(-0.1), DomainError);
}

TEST_CASE("running maximum")
{
    const auto ricker = BirthFunction::ricker(std::numbers::e, 1, 1);
    const auto dense = oracle::dense_argmax([&](double w) { return ricker(w); }, 0.0, 2.0);
    CHECK(dense.value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(ricker.running_max(2.0) == doctest::Approx(dense.value).epsilon(1e-10));
    CHECK(ricker.running_max(2.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(BirthFunction::logistic(2, 1).running_max(0.3) == doctest::Approx(0.42).epsilon(1e-15));
    for (const auto& f : {BirthFunction::ricker(2, 1, 1), BirthFunction::beverton_holt(2, 1, 2),
                          BirthFunction::logistic(2, 1)})
        CHECK(f.running_max(0.0) == 0.0);
}

TEST_CASE("landmarks")
{
    auto lg = BirthFunction::logistic(2, 1).landmarks();
    REQUIRE(lg.wbar);
    CHECK(*lg.wbar == doctest::Approx(0.5));
    CHECK(*lg.fmax == doctest::Approx(0.5));

    auto rk = BirthFunction::ricker(2, 1, 1).landmarks();
    CHECK(*rk.wbar == doctest::Approx(1.0));
    CHECK(*rk.fmax == doctest::Approx(2.0 / std::numbers::e).epsilon(1e-15));

    const auto r22 = BirthFunction::ricker(2, 2, 2);
    const auto argmax = oracle::dense_argmax([&](double w) { return r22(w); }, 0.0, 2.0);
    CHECK(argmax.at == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(*r22.landmarks().wbar == doctest::Approx(argmax.at).epsilon(1e-5));
    CHECK(*r22.landmarks().wbar == doctest::Approx(0.5).epsilon(1e-15));

    const auto bh = BirthFunction::beverton_holt(3, 2, 3);
    const auto bh_oracle = oracle::dense_argmax([&](double w) { return bh(w); }, 0.0, 3.0);
    CHECK(*bh.landmarks().wbar == doctest::Approx(bh_oracle.at).epsilon(1e-5));
    CHECK(*bh.landmarks().fmax == doctest::Approx(bh_oracle.value).epsilon(1e-10));

    CHECK_FALSE(BirthFunction::beverton_holt(2, 1, 1).landmarks().wbar);
    CHECK_FALSE(BirthFunction::beverton_holt(2, 1, 0.5).landmarks().fmax);
    CHECK_THROWS_AS(BirthFunction::table({{0, 0}, {1, 1}}).landmarks(), UnsupportedError);
}

TEST_CASE("tables")
{
    const auto t = BirthFunction::table({{0, 0}, {1, 2}, {2, 1}});
    CHECK(t.p() == 2.0);
    CHECK(t(0.5) == doctest::Approx(1.0));
    CHECK(t(1.5) == doctest::Approx(1.5));
    CHECK(t(5.0) == 1.0);
    CHECK(t.running_max(3.0) == 2.0);
    CHECK(t.running_max(0.25) == doctest::Approx(0.5));
    CHECK_THROWS_AS(BirthFunction::table({{0.5, 0}, {1, 1}}), DomainError);
    CHECK_THROWS_AS(BirthFunction::table({{0, 0}, {1, 1}, {1, 2}}), DomainError);
    CHECK_THROWS_AS(birth_kind_from_string("gompertz"), DomainError);
}

TEST_CASE("invalid parameters")
{
    CHECK_THROWS_AS(BirthFunction::ricker(-1, 1, 1), DomainError);
    CHECK_THROWS_AS(BirthFunction::ricker(1, 1, 0), DomainError);
    CHECK_THROWS_AS(BirthFunction::beverton_holt(1, 0, 1), DomainError);
    CHECK_THROWS_AS(BirthFunction::logistic(1, -1), DomainError);
}

namespace
{

BirthFunction random_preset(Gen& g, int which)
{
    switch (which % 3)
    {
    case 0: return BirthFunction::ricker(g.log_uniform(0.5, 20), g.log_uniform(0.2, 5), g.uniform(0.3, 3));
    case 1: return BirthFunction::beverton_holt(g.log_uniform(0.5, 20), g.log_uniform(0.2, 5), g.uniform(0.3, 4));
    default: return BirthFunction::logistic(g.log_uniform(0.5, 5), g.log_uniform(0.2, 5));
    }
}

} // namespace

TEST_CASE("property: f <= p w, running max, landmark optimality, derivative")
{
    Gen gen(11);
    for (int trial = 0; trial < 90; ++trial)
    {
        const auto f = random_preset(gen, trial);
        const double M = f.kind() == BirthKind::logistic ? f.K() : 5.0;
        double prev_max = 0.0;
        for (int i = 1; i <= 400; ++i)
        {
            const double w = M * i / 400.0;
            CHECK(f(w) <= f.p() * w + 1e-12);
            const double rm = f.running_max(w);
            CHECK(rm >= prev_max);
            CHECK(rm >= f(w) - 1e-15);
            prev_max = rm;
        }
        const auto lm = f.landmarks();
        if (lm.wbar)
        {
            const double wb = *lm.wbar, h = 1e-4 * wb;
            CHECK(f(wb + h) <= f(wb));
            CHECK(f(wb - h) <= f(wb));
            CHECK(std::abs(f.derivative(wb)) < 1e-10 * std::max(1.0, f.p()));
            CHECK(*lm.fmax == doctest::Approx(f(wb)).epsilon(1e-13));
        }
        for (int i = 0; i < 100; ++i)
        {
            const double w = gen.uniform(0.01, 1.0) * M;
            const double step = 1e-6 * std::max(w, 1e-3);
            const double fd = (f(w + step) - f(w - step)) / (2 * step);
            const double an = f.derivative(w);
            CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)) + 1e-6 * f.p());
        }
        CHECK(f.derivative(0.0) == doctest::Approx(f.p()).epsilon(1e-12));
    }
}
