#include "agedelay/simulator.hpp"

#include "agedelay/attractivity.hpp"
#include "agedelay/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace agedelay
{

void SimGrid::validate() const
{
    if (nx < 8)
        throw DomainError("grid.nx must be >= 8");
    if (na < 8)
        throw DomainError("grid.na must be >= 8");
    if (steps_per_delay < 4)
        throw DomainError("grid.steps_per_delay must be >= 4 (dt = r / m with m >= 4)");
}

std::string_view to_string(HistoryKind kind)
{
    switch (kind)
    {
    case HistoryKind::constant: return "constant";
    case HistoryKind::cosine_perturbed: return "cosine-perturbed";
    case HistoryKind::random_bounded: return "random-bounded";
    case HistoryKind::custom_table: return "custom-table";
    }
    return "?";
}

HistoryKind history_kind_from_string(std::string_view name)
{
    if (name == "constant")
        return HistoryKind::constant;
    if (name == "cosine-perturbed")
        return HistoryKind::cosine_perturbed;
    if (name == "random-bounded")
        return HistoryKind::random_bounded;
    if (name == "custom-table")
        return HistoryKind::custom_table;
    throw DomainError("unknown initial history kind '" + std::string(name)
                      + "' (expected constant, cosine-perturbed, random-bounded or custom-table)");
}

void InitialHistory::validate() const
{
    switch (kind)
    {
    case HistoryKind::constant:
        if (!(value >= 0.0) || !std::isfinite(value))
            throw DomainError("initial.value must be finite and nonnegative");
        break;
    case HistoryKind::cosine_perturbed:
        if (!(value >= 0.0) || !std::isfinite(value) || !std::isfinite(amplitude)
            || std::abs(amplitude) > value)
            throw DomainError("cosine-perturbed history needs value >= |amplitude| (nonnegativity)");
        if (!std::isfinite(mode) || !std::isfinite(omega))
            throw DomainError("cosine-perturbed history: mode and omega must be finite");
        break;
    case HistoryKind::random_bounded:
        if (!(lo >= 0.0 && hi >= lo) || !std::isfinite(hi))
            throw DomainError("random-bounded history needs 0 <= lo <= hi");
        break;
    case HistoryKind::custom_table:
        if (table.empty())
            throw DomainError("custom-table history needs at least one node");
        for (std::size_t i = 0; i < table.size(); ++i)
        {
            if (!(table[i].second >= 0.0) || !std::isfinite(table[i].second))
                throw DomainError("custom-table history values must be finite and nonnegative");
            if (i > 0 && !(table[i].first > table[i - 1].first))
                throw DomainError("custom-table history x values must be strictly increasing");
        }
        break;
    }
}

double InitialHistory::max_value() const
{
    switch (kind)
    {
    case HistoryKind::constant: return value;
    case HistoryKind::cosine_perturbed: return value + std::abs(amplitude);
    case HistoryKind::random_bounded: return hi;
    case HistoryKind::custom_table:
    {
        double m = 0.0;
        for (const auto& node : table)
            m = std::max(m, node.second);
        return m;
    }
    }
    return 0.0;
}

HistoryBuffer::HistoryBuffer(double dt, std::size_t capacity) : dt_(dt), capacity_(capacity) {}

void HistoryBuffer::push(double t, std::vector<double> slice)
{
    if (slices_.empty())
        oldest_time_ = t;
    slices_.push_back(std::move(slice));
    if (slices_.size() > capacity_)
    {
        slices_.pop_front();
        oldest_time_ += dt_;
    }
}

double HistoryBuffer::newest_time() const
{
    return oldest_time_ + dt_ * static_cast<double>(slices_.size() - 1);
}

void HistoryBuffer::interpolate(double s, std::span<double> out) const
{
    const double pos = (s - oldest_time_) / dt_;
    const double last = static_cast<double>(slices_.size() - 1);
    constexpr double snap = 1e-9;
    if (pos < -snap || pos > last + snap)
    {
        std::ostringstream os;
        os.precision(17);
        os << "history buffer underrun: lookback time " << s << " outside [" << oldest_time_ << ", "
           << newest_time() << "]";
        throw std::logic_error(os.str());
    }
    const double clamped = std::clamp(pos, 0.0, last);
    auto k = static_cast<std::size_t>(std::floor(clamped));
    double frac = clamped - static_cast<double>(k);
    if (frac < snap)
        frac = 0.0;
    else if (frac > 1.0 - snap)
    {
        ++k;
        frac = 0.0;
    }
    const auto& a = slices_[k];
    if (frac == 0.0)
    {
        std::copy(a.begin(), a.end(), out.begin());
        return;
    }
    const auto& b = slices_[k + 1];
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = a[j] + frac * (b[j] - a[j]);
}

std::string_view to_string(SimVerdict v)
{
    switch (v)
    {
    case SimVerdict::converged_to_wstar: return "converged-to-wstar";
    case SimVerdict::converged_to_zero: return "converged-to-zero";
    case SimVerdict::persistent_no_convergence: return "persistent-no-convergence";
    case SimVerdict::undecided: return "undecided";
    }
    return "?";
}

namespace
{

QuadratureRule make_age_rule(const AgeRates& rates, std::size_t na)
{
    const double span = rates.life_span() - rates.r();
    if (na % 8 == 0)
        return rates.maturity_rule(span / static_cast<double>(na / 8) * (1.0 + 1e-12), 8);
    return rates.maturity_rule(span * (1.0 + 1e-12), na);
}

std::size_t history_slices(double life_span, double dt)
{
    return static_cast<std::size_t>(std::ceil(life_span / dt - 1e-9));
}

} // namespace

Simulator::Simulator(AgeRates rates, BirthFunction birth, SimGrid grid, KernelOptions kernel,
                     double state_cap)
    : rates_(std::move(rates)), birth_(std::move(birth)), grid_(grid), state_cap_(state_cap),
      dt_(rates_.r() / static_cast<double>(grid.steps_per_delay)),
      history_(dt_, history_slices(rates_.life_span(), dt_) + 2)
{
    grid_.validate();
    if (!(state_cap_ > 0.0))
        throw DomainError("state_cap must be positive");

    const auto trap = trapezoid(0.0, std::numbers::pi, grid_.nx);
    xs_ = trap.nodes;
    age_rule_ = make_age_rule(rates_, grid_.na);

    const KernelEvaluator kernel_eval(rates_, kernel);
    const auto table = kernel_eval.tabulate(age_rule_.nodes, xs_, xs_);
    const std::size_t nxp = xs_.size();
    weighted_kernel_.resize(age_rule_.size() * nxp * nxp);
    for (std::size_t i = 0; i < age_rule_.size(); ++i)
        for (std::size_t j = 0; j < nxp; ++j)
            for (std::size_t l = 0; l < nxp; ++l)
                weighted_kernel_[(i * nxp + j) * nxp + l] =
                    age_rule_.weights[i] * trap.weights[l] * table(i, j, l);
}

void Simulator::initialize(const InitialHistory& phi)
{
    phi.validate();
    const double t0 = rates_.params().t0;
    const double window_start = t0 - rates_.life_span();
    const std::size_t J = history_slices(rates_.life_span(), dt_);
    const std::size_t nxp = xs_.size();

    history_ = HistoryBuffer(dt_, J + 2);
    std::mt19937_64 rng(phi.seed);
    auto uniform01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    for (std::size_t jj = 0; jj <= J; ++jj)
    {
        const double s = t0 - dt_ * static_cast<double>(J - jj);
        const double s_eval = std::max(s, window_start);
        std::vector<double> slice(nxp);
        for (std::size_t j = 0; j < nxp; ++j)
        {
            const double x = xs_[j];
            double v = 0.0;
            switch (phi.kind)
            {
            case HistoryKind::constant:
                v = phi.value;
                break;
            case HistoryKind::cosine_perturbed:
                v = phi.value + phi.amplitude * std::cos(phi.mode * x) * std::cos(phi.omega * (s_eval - t0));
                break;
            case HistoryKind::random_bounded:
                v = phi.lo + (phi.hi - phi.lo) * uniform01();
                break;
            case HistoryKind::custom_table:
            {
                const auto& tab = phi.table;
                if (x <= tab.front().first)
                    v = tab.front().second;
                else if (x >= tab.back().first)
                    v = tab.back().second;
                else
                {
                    const auto hi = std::upper_bound(tab.begin(), tab.end(), x,
                                                     [](double val, const auto& n) { return val < n.first; });
                    const auto lo = hi - 1;
                    v = lo->second + (x - lo->first) / (hi->first - lo->first) * (hi->second - lo->second);
                }
                break;
            }
            }
            slice[j] = std::clamp(v, 0.0, state_cap_);
        }
        history_.push(s, std::move(slice));
    }
}

void Simulator::step_block(const SliceObserver& observer)
{
    if (history_.size() == 0)
        throw std::logic_error("Simulator::step_block before initialize");

    const std::size_t nxp = xs_.size();
    const std::size_t n_age = age_rule_.size();
    const double t_start = history_.newest_time();
    std::vector<double> lookback(nxp);
    std::vector<double> births(nxp);

    for (std::size_t k = 1; k <= grid_.steps_per_delay; ++k)
    {
        const double t_new = t_start + dt_ * static_cast<double>(k);
        std::vector<double> next(nxp, 0.0);
        for (std::size_t i = 0; i < n_age; ++i)
        {
            history_.interpolate(t_new - age_rule_.nodes[i], lookback);
            for (std::size_t l = 0; l < nxp; ++l)
            {
                births[l] = birth_(lookback[l]);
                if (!std::isfinite(births[l]))
                {
                    std::ostringstream os;
                    os.precision(17);
                    os << "non-finite birth rate at t=" << t_new - age_rule_.nodes[i] << ", x=" << xs_[l];
                    throw StateError(os.str());
                }
            }
            const double* kw = weighted_kernel_.data() + i * nxp * nxp;
            for (std::size_t j = 0; j < nxp; ++j)
            {
                const double* row = kw + j * nxp;
                double acc = 0.0;
                for (std::size_t l = 0; l < nxp; ++l)
                    acc += row[l] * births[l];
                next[j] += acc;
            }
        }
        for (std::size_t j = 0; j < nxp; ++j)
        {
            if (!std::isfinite(next[j]))
            {
                std::ostringstream os;
                os.precision(17);
                os << "non-finite state at t=" << t_new << ", x=" << xs_[j];
                throw StateError(os.str());
            }
            next[j] = std::clamp(next[j], 0.0, state_cap_);
        }
        if (observer)
            observer(t_new, next);
        history_.push(t_new, std::move(next));
    }
}

std::vector<double> Simulator::discrete_kstar() const
{
    const std::size_t nxp = xs_.size();
    std::vector<double> out(nxp, 0.0);
    for (std::size_t i = 0; i < age_rule_.size(); ++i)
        for (std::size_t j = 0; j < nxp; ++j)
            for (std::size_t l = 0; l < nxp; ++l)
                out[j] += weighted_kernel_[(i * nxp + j) * nxp + l];
    return out;
}

SimulationReport run(Simulator& sim, const InitialHistory& phi, double horizon,
                     const SimulationOptions& options, const SliceObserver& observer)
{
    if (!(options.tol_conv > 0.0) || options.n_windows == 0)
        throw DomainError("simulation options: tol_conv and n_windows must be positive");

    sim.initialize(phi);
    SimulationReport report;

    auto record = [&](double t, std::span<const double> w) {
        const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
        report.times.push_back(t);
        report.sup_x.push_back(*hi);
        report.inf_x.push_back(*lo);
    };
    const auto& first = sim.current();
    report.initial_nonzero = std::any_of(first.begin(), first.end(), [](double v) { return v > 0.0; });
    record(sim.time(), first);
    if (observer)
        observer(sim.time(), first);

    const SliceObserver both = [&](double t, std::span<const double> w) {
        record(t, w);
        if (observer)
            observer(t, w);
    };
    while (sim.time() < horizon - 1e-9 * std::max(1.0, std::abs(horizon)))
        sim.step_block(both);

    const double T = sim.time();
    const double window = static_cast<double>(options.n_windows) * sim.rates().life_span();
    report.tail_start = T - window;

    double tail_sup = 0.0;
    double tail_inf = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> tail;
    for (std::size_t i = 0; i < report.times.size(); ++i)
        if (report.times[i] >= report.tail_start - 1e-9)
            tail.push_back(i);
    for (std::size_t i : tail)
    {
        tail_sup = std::max(tail_sup, report.sup_x[i]);
        tail_inf = std::min(tail_inf, report.inf_x[i]);
    }
    report.empirical_wsup = tail_sup;
    report.empirical_winf = tail_inf;
    report.delta_floor = tail_inf;

    const bool enough = report.times.front() <= report.tail_start + 1e-9;
    if (!enough)
    {
        report.verdict = SimVerdict::undecided;
        report.tail_deviation = tail_sup;
        return report;
    }
    if (tail_sup < options.tol_conv)
    {
        report.verdict = SimVerdict::converged_to_zero;
        report.tail_deviation = tail_sup;
        return report;
    }
    double best = std::numeric_limits<double>::infinity();
    for (double target : options.wstar_candidates)
    {
        const double dev = std::max(tail_sup - target, target - tail_inf);
        if (dev < best)
        {
            best = dev;
            report.wstar = target;
        }
    }
    report.tail_deviation = std::isfinite(best) ? best : tail_sup;
    if (report.wstar && best < options.tol_conv)
        report.verdict = SimVerdict::converged_to_wstar;
    else if (tail_inf >= options.delta_report)
        report.verdict = SimVerdict::persistent_no_convergence;
    else
        report.verdict = SimVerdict::undecided;
    return report;
}

std::pair<double, double> empirical_fluctuations(const SimulationReport& report, double tail_fraction)
{
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        throw DomainError("empirical_fluctuations: tail_fraction must lie in (0, 1]");
    const std::size_t n = report.times.size();
    const auto count = static_cast<std::size_t>(std::floor(tail_fraction * static_cast<double>(n)));
    if (n == 0 || count == 0)
        throw DomainError("empirical_fluctuations: empty tail");
    double wsup = 0.0;
    double winf = std::numeric_limits<double>::infinity();
    for (std::size_t i = n - count; i < n; ++i)
    {
        wsup = std::max(wsup, report.sup_x[i]);
        winf = std::min(winf, report.inf_x[i]);
    }
    return {wsup, winf};
}

FluctuationAudit fluctuation_inequality_audit(const SimulationReport& report, const BirthFunction& f,
                                              double kstar, double tol_conv)
{
    FluctuationAudit audit;
    audit.wsup = report.empirical_wsup;
    audit.winf = report.empirical_winf;
    audit.eps = report.wstar && *report.wstar > 0.0 ? 1e-2 * *report.wstar : tol_conv;
    const double M = std::max(audit.wsup, audit.winf);
    audit.upper_rhs = kstar * fluctuation_F(f, audit.wsup, audit.winf, M);
    audit.lower_rhs = kstar * fluctuation_F(f, audit.winf, audit.wsup, M);
    audit.upper_ok = audit.wsup <= audit.upper_rhs + audit.eps;
    audit.lower_ok = audit.winf >= audit.lower_rhs - audit.eps;
    audit.note = "finite-time tail extremes stand in for limsup/liminf; the lower inequality uses the "
                 "envelope F(winf, wsup)";
    return audit;
}

} // namespace agedelay
