#pragma once

#include "agedelay/age_rates.hpp"
#include "agedelay/birth.hpp"
#include "agedelay/kernel.hpp"
#include "agedelay/quadrature.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace agedelay
{

/// Discretization: nx + 1 uniform points on [0, pi] (trapezoid in y),
/// dt = r / steps_per_delay, and na composite Gauss-Legendre nodes on [r, A_l]
/// (8-point panels when na is a multiple of 8, a single na-point panel
/// otherwise; panels are split further at kinks of the death rate).
struct SimGrid
{
    std::size_t nx = 64;
    std::size_t steps_per_delay = 16;
    std::size_t na = 16;

    /// Throws DomainError unless nx >= 8, na >= 8, steps_per_delay >= 4.
    void validate() const;

    friend bool operator==(const SimGrid&, const SimGrid&) = default;
};

enum class HistoryKind
{
    constant,         ///< phi = value
    cosine_perturbed, ///< phi = value + amplitude cos(mode x) cos(omega (s - t0))
    random_bounded,   ///< i.i.d. uniform in [lo, hi] per stored node, seeded
    custom_table,     ///< piecewise-linear in x through (x_i, phi_i), constant in time
};

std::string_view to_string(HistoryKind kind);
HistoryKind history_kind_from_string(std::string_view name);

struct InitialHistory
{
    HistoryKind kind = HistoryKind::constant;
    double value = 0.0;
    double amplitude = 0.0;
    double mode = 1.0;
    double omega = 0.0;
    double lo = 0.0;
    double hi = 1.0;
    std::uint64_t seed = 42;
    std::vector<std::pair<double, double>> table;

    /// Throws DomainError if the history could be negative.
    void validate() const;

    /// Upper bound of phi over its domain.
    double max_value() const;

    friend bool operator==(const InitialHistory&, const InitialHistory&) = default;
};

/// Uniformly spaced spatial slices of w over the trailing delay window.
class HistoryBuffer
{
public:
    HistoryBuffer(double dt, std::size_t capacity);

    void push(double t, std::vector<double> slice);

    double dt() const { return dt_; }
    double oldest_time() const { return oldest_time_; }
    double newest_time() const;
    std::size_t size() const { return slices_.size(); }
    const std::vector<double>& newest() const { return slices_.back(); }
    const std::vector<double>& slice(std::size_t i) const { return slices_[i]; }

    /// Linear interpolation in time; throws std::logic_error if s is outside
    /// the stored window.
    void interpolate(double s, std::span<double> out) const;

private:
    double dt_;
    std::size_t capacity_;
    double oldest_time_ = 0.0;
    std::deque<std::vector<double>> slices_;
};

enum class SimVerdict
{
    converged_to_wstar,
    converged_to_zero,
    persistent_no_convergence,
    undecided,
};

std::string_view to_string(SimVerdict v);

struct SimulationOptions
{
    double tol_conv = 1e-3;
    std::size_t n_windows = 5;
    /// Tail infimum at or above this counts as persistence.
    double delta_report = 1e-6;
    /// Candidate positive steady states the tail is compared against.
    std::vector<double> wstar_candidates;
};

struct SimulationReport
{
    std::vector<double> times;
    std::vector<double> sup_x;
    std::vector<double> inf_x;
    double empirical_wsup = 0.0;
    double empirical_winf = 0.0;
    SimVerdict verdict = SimVerdict::undecided;
    std::optional<double> wstar;
    /// Tail max of sup_x |w - target| for the matched target (or sup_x for zero).
    double tail_deviation = 0.0;
    double delta_floor = 0.0;
    double tail_start = 0.0;
    bool initial_nonzero = false;
};

using SliceObserver = std::function<void(double t, std::span<const double> w)>;

/// Method-of-steps integrator: each block advances by r, and every lookback
/// t' - a with a >= r lands at or before the block start.
class Simulator
{
public:
    /// Values are clamped into [0, state_cap]; +inf disables the upper clamp.
    Simulator(AgeRates rates, BirthFunction birth, SimGrid grid, KernelOptions kernel = {},
              double state_cap = std::numeric_limits<double>::infinity());

    void initialize(const InitialHistory& phi);

    /// Advances by r (steps_per_delay stamps). The observer sees every new slice.
    void step_block(const SliceObserver& observer = {});

    double time() const { return history_.newest_time(); }
    double dt() const { return dt_; }
    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& current() const { return history_.newest(); }
    const HistoryBuffer& history() const { return history_; }
    const QuadratureRule& age_rule() const { return age_rule_; }
    const AgeRates& rates() const { return rates_; }
    const BirthFunction& birth() const { return birth_; }
    const SimGrid& grid() const { return grid_; }
    double state_cap() const { return state_cap_; }

    /// sum_i W_i sum_j W_j K(a_i, x, y_j): the discrete k*, per x.
    std::vector<double> discrete_kstar() const;

private:
    AgeRates rates_;
    BirthFunction birth_;
    SimGrid grid_;
    double state_cap_;
    double dt_;
    std::vector<double> xs_;
    QuadratureRule age_rule_;
    /// W_a W_y K(a_i, x_j, y_l), indexed [(i * nxp + j) * nxp + l].
    std::vector<double> weighted_kernel_;
    HistoryBuffer history_;
};

/// Runs blocks until time >= horizon (absolute time) and classifies the tail
/// [T - n_windows A_l, T].
SimulationReport run(Simulator& sim, const InitialHistory& phi, double horizon,
                     const SimulationOptions& options, const SliceObserver& observer = {});

/// (max sup_x, min inf_x) over the trailing tail_fraction of stamps.
std::pair<double, double> empirical_fluctuations(const SimulationReport& report, double tail_fraction);

struct FluctuationAudit
{
    double wsup = 0.0;
    double winf = 0.0;
    double upper_rhs = 0.0; ///< k* F(wsup, winf)
    double lower_rhs = 0.0; ///< k* F(winf, wsup)
    double eps = 0.0;
    bool upper_ok = false;  ///< wsup <= k* F(wsup, winf) + eps
    bool lower_ok = false;  ///< winf >= k* F(winf, wsup) - eps
    std::string note;
};

/// Empirical check of the limsup/liminf inequalities on the report's tail
/// extremes. eps = 1e-2 w* when a positive target is known, tol_conv otherwise.
FluctuationAudit fluctuation_inequality_audit(const SimulationReport& report, const BirthFunction& f,
                                              double kstar, double tol_conv);

} // namespace agedelay
