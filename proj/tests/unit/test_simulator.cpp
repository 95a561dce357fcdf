#include "agedelay/attractivity.hpp"
#include "agedelay/errors.hpp"
#include "agedelay/simulator.hpp"
#include "agedelay/spectral.hpp"

#include "gen.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace agedelay;

namespace
{

AgeRates benchmark(double d = 0.0, double D = 0.5)
{
    return AgeRates(RateProfile::constant(D), RateProfile::constant(d), ModelParams{1.0, 2.0, 2.0});
}

InitialHistory constant_history(double c)
{
    InitialHistory h;
    h.kind = HistoryKind::constant;
    h.value = c;
    return h;
}

InitialHistory cosine_history(double value, double amplitude)
{
    InitialHistory h;
    h.kind = HistoryKind::cosine_perturbed;
    h.value = value;
    h.amplitude = amplitude;
    h.mode = 2;
    h.omega = 1.3;
    return h;
}

double max_deviation(const std::vector<double>& w, double target)
{
    double m = 0.0;
    for (double v : w)
        m = std::max(m, std::abs(v - target));
    return m;
}

} // namespace

TEST_CASE("history buffer interpolates linearly and detects underrun")
{
    HistoryBuffer buf(0.5, 3);
    buf.push(1.0, {1.0, 2.0});
    buf.push(1.5, {2.0, 4.0});
    buf.push(2.0, {3.0, 6.0});
    buf.push(2.5, {4.0, 8.0});
    CHECK(buf.size() == 3);
    CHECK(buf.oldest_time() == 1.5);
    CHECK(buf.newest_time() == 2.5);
    std::vector<double> out(2);
    buf.interpolate(1.75, out);
    CHECK(out[0] == doctest::Approx(2.5));
    CHECK(out[1] == doctest::Approx(5.0));
    buf.interpolate(2.5, out);
    CHECK(out[0] == 4.0);
    CHECK_THROWS_AS(buf.interpolate(1.0, out), std::logic_error);
    CHECK_THROWS_AS(buf.interpolate(2.6, out), std::logic_error);
}

TEST_CASE("grid and history validation")
{
    SimGrid g;
    g.nx = 4;
    CHECK_THROWS_AS(g.validate(), DomainError);
    g = SimGrid{};
    g.steps_per_delay = 3;
    CHECK_THROWS_AS(g.validate(), DomainError);
    InitialHistory h = cosine_history(0.1, 0.2);
    CHECK_THROWS_AS(h.validate(), DomainError);
    CHECK_THROWS_AS(history_kind_from_string("sawtooth"), DomainError);
}

TEST_CASE("steady state is a discrete fixed point")
{
    Simulator sim(benchmark(), BirthFunction::logistic(2.5, 1), SimGrid{});
    sim.initialize(constant_history(0.6));
    sim.step_block();
    CHECK(sim.time() == doctest::Approx(3.0));
    CHECK(max_deviation(sim.current(), 0.6) < 5e-6);
}

TEST_CASE("zero history stays zero")
{
    Simulator sim(benchmark(), BirthFunction::ricker(4, 1, 1), SimGrid{});
    sim.initialize(constant_history(0.0));
    sim.step_block();
    sim.step_block();
    CHECK(max_deviation(sim.current(), 0.0) == 0.0);
}

TEST_CASE("linear birth multiplies a constant history by p k*")
{
    const auto rates = benchmark(0.1);
    const double p = 1.5, c = 0.01;
    Simulator sim(rates, BirthFunction::linear(p), SimGrid{});
    sim.initialize(constant_history(c));
    sim.step_block();
    const double expected = p * rates.kstar() * c;
    // After one step every lookback lands in the constant history, so all
    // stamps in the block equal p k* c.
    CHECK(max_deviation(sim.current(), expected) < 1e-12);
    for (double k : sim.discrete_kstar())
        CHECK(std::abs(k - rates.kstar()) < 1e-12);
}

TEST_CASE("benchmark runs reach their predicted verdicts")
{
    SimulationOptions opt;
    {
        Simulator sim(benchmark(), BirthFunction::logistic(2.5, 1), SimGrid{});
        opt.wstar_candidates = {0.6};
        const auto rep = run(sim, cosine_history(0.5, 0.3), 200.0, opt);
        CHECK(rep.verdict == SimVerdict::converged_to_wstar);
        REQUIRE(rep.wstar);
        CHECK(*rep.wstar == 0.6);
        CHECK(rep.empirical_wsup - rep.empirical_winf < 2 * opt.tol_conv);
        const auto [wsup, winf] = empirical_fluctuations(rep, 0.1);
        CHECK(wsup - winf < 2 * opt.tol_conv);
        CHECK(winf >= rep.delta_floor);
        CHECK(rep.delta_floor > 0.0);
        const auto audit = fluctuation_inequality_audit(rep, sim.birth(), 1.0, opt.tol_conv);
        CHECK(audit.upper_ok);
        CHECK(audit.lower_ok);
    }
    {
        Simulator sim(benchmark(), BirthFunction::logistic(0.8, 1), SimGrid{});
        opt.wstar_candidates.clear();
        const auto rep = run(sim, cosine_history(0.5, 0.3), 200.0, opt);
        CHECK(rep.verdict == SimVerdict::converged_to_zero);
        CHECK(empirical_fluctuations(rep, 0.1).first < opt.tol_conv);
        const auto audit = fluctuation_inequality_audit(rep, sim.birth(), 1.0, opt.tol_conv);
        CHECK(audit.upper_ok);
        CHECK(audit.lower_ok);
    }
    {
        const auto f = BirthFunction::ricker(std::exp(1.5), 1, 1);
        Simulator sim(benchmark(), f, SimGrid{});
        opt.wstar_candidates = {1.5};
        const auto rep = run(sim, cosine_history(0.5, 0.3), 200.0, opt);
        CHECK(rep.verdict == SimVerdict::converged_to_wstar);
        CHECK(*rep.wstar == doctest::Approx(1.5));
        const auto audit = fluctuation_inequality_audit(rep, f, 1.0, opt.tol_conv);
        CHECK(audit.upper_ok);
        CHECK(audit.lower_ok);
    }
}

TEST_CASE("verdicts for short or non-converging runs")
{
    Simulator sim(benchmark(), BirthFunction::logistic(2.5, 1), SimGrid{});
    SimulationOptions opt;
    opt.wstar_candidates = {0.6};
    CHECK(run(sim, cosine_history(0.5, 0.3), 5.0, opt).verdict == SimVerdict::undecided);
    opt.wstar_candidates = {0.9};
    CHECK(run(sim, cosine_history(0.5, 0.3), 40.0, opt).verdict == SimVerdict::persistent_no_convergence);
    SimulationReport empty;
    CHECK_THROWS_AS(empirical_fluctuations(empty, 0.5), DomainError);
}

TEST_CASE("non-finite states are reported")
{
    Simulator sim(benchmark(), BirthFunction::linear(1e300), SimGrid{});
    InitialHistory h = constant_history(1e10);
    sim.initialize(h);
    CHECK_THROWS_AS(sim.step_block(), StateError);
}

TEST_CASE("property: nonnegativity, ordering, dissipativity over random histories")
{
    Gen gen(29);
    const auto f = BirthFunction::logistic(2.5, 1);
    const double M = 0.625;
    SimGrid coarse;
    coarse.nx = 16;
    coarse.steps_per_delay = 8;
    coarse.na = 8;
    Simulator sim(benchmark(), f, coarse, {}, 10.0);
    for (int trial = 0; trial < 8; ++trial)
    {
        InitialHistory h;
        h.kind = HistoryKind::random_bounded;
        h.lo = 0.0;
        h.hi = gen.uniform(0.05, 1.0);
        h.seed = static_cast<std::uint64_t>(gen.integer(1, 1 << 30));
        SimulationOptions opt;
        opt.wstar_candidates = {0.6};
        double min_seen = INFINITY;
        const auto rep = run(sim, h, 60.0, opt, [&](double, std::span<const double> w) {
            min_seen = std::min(min_seen, *std::min_element(w.begin(), w.end()));
        });
        CHECK(min_seen >= 0.0);
        for (std::size_t i = 0; i < rep.times.size(); ++i)
        {
            CHECK(rep.inf_x[i] <= rep.sup_x[i]);
            if (i > 0)
                CHECK(rep.times[i] > rep.times[i - 1]);
        }
        CHECK(rep.empirical_wsup <= M + opt.tol_conv);
        CHECK(rep.empirical_winf > 0.0);
    }
}

TEST_CASE("property: seeded random histories are reproducible")
{
    InitialHistory h;
    h.kind = HistoryKind::random_bounded;
    h.hi = 0.8;
    h.seed = 99;
    SimGrid coarse;
    coarse.nx = 16;
    coarse.na = 8;
    Simulator a(benchmark(), BirthFunction::logistic(2.5, 1), coarse);
    Simulator b(benchmark(), BirthFunction::logistic(2.5, 1), coarse);
    a.initialize(h);
    b.initialize(h);
    a.step_block();
    b.step_block();
    CHECK(a.current() == b.current());
    h.seed = 100;
    b.initialize(h);
    b.step_block();
    CHECK(a.current() != b.current());
}

TEST_CASE("property: refining the grid moves the final state by much less than tol_conv")
{
    const auto f = BirthFunction::logistic(2.5, 1);
    SimulationOptions opt;
    opt.wstar_candidates = {0.6};
    SimGrid fine;
    fine.nx = 128;
    fine.steps_per_delay = 32;
    fine.na = 32;
    Simulator base(benchmark(), f, SimGrid{});
    Simulator refined(benchmark(), f, fine);
    const auto phi = cosine_history(0.5, 0.3);
    run(base, phi, 30.0, opt);
    run(refined, phi, 30.0, opt);
    const auto& u = base.current();
    const auto& v = refined.current();
    double diff = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j)
        diff = std::max(diff, std::abs(u[j] - v[2 * j]));
    CHECK(diff < opt.tol_conv / 10.0);
}

TEST_CASE("property: linear regime grows by exp(lambda0 r) per block")
{
    const auto rates = benchmark(0.2);
    const double p = 1.8;
    const double lambda0 = CharacteristicFunction(rates).principal_eigenvalue(p);
    Simulator sim(rates, BirthFunction::linear(p), SimGrid{});
    sim.initialize(constant_history(1e-6));
    std::vector<double> block_means;
    for (int b = 0; b < 8; ++b)
    {
        sim.step_block();
        double s = 0.0;
        for (double v : sim.current())
            s += v;
        block_means.push_back(s / static_cast<double>(sim.current().size()));
    }
    const double factor = block_means.back() / block_means[block_means.size() - 2];
    CHECK(factor == doctest::Approx(std::exp(lambda0 * rates.r())).epsilon(0.02));
}
