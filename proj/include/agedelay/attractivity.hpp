#pragma once

#include "agedelay/birth.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace agedelay
{

/// Outcome of one numeric hypothesis check. `failures` names each violated
/// clause; `evidence` holds the sample points that violated it (or, on
/// success, the extreme points inspected).
struct Verdict
{
    bool ok = true;
    std::vector<std::string> failures;
    std::vector<double> evidence;

    void fail(std::string why, std::optional<double> at = std::nullopt)
    {
        ok = false;
        failures.push_back(std::move(why));
        if (at)
            evidence.push_back(*at);
    }
};

struct F2Result
{
    Verdict verdict;
    /// Ceiling M beyond which k* fbar(w) <= w; zero when the check failed.
    double M = 0.0;
    /// "closed-form" for the presets, "scan" for the doubling search.
    std::string method;
};

enum class PCondition
{
    P0,
    P1,
    P2,
    brute_force_only,
    fail,
};

std::string_view to_string(PCondition c);

struct PConditionReport
{
    PCondition which = PCondition::fail;
    bool p0 = false;
    bool p1 = false;
    bool p2 = false;
    /// Pairs (u, v) violating property (P) on the brute-force grid.
    std::vector<std::pair<double, double>> violations;
};

struct TheoremVerdict
{
    bool covered = false;
    /// e.g. "ricker:P0-branch", "logistic:P2-branch", "beverton-holt:fbar-bound".
    std::string branch;
    /// The inequality that decided the verdict, with its numbers substituted.
    std::string condition;
};

struct HypothesisReport
{
    Verdict f1;
    Verdict f2;
    Verdict f3;
    double M = 0.0;
    std::optional<double> wstar;
    PConditionReport p_conditions;
    TheoremVerdict theorem;
    std::vector<std::string> notes;
};

/// Slack used for monotonicity tests on sampled grids.
inline constexpr double monotone_slack = 1e-12;

/// (F1) on [0, wmax]: f(0) = 0, bounded difference quotients, f(w) <= p w,
/// and one-sided slope at 0 close to p.
Verdict check_F1(const BirthFunction& f, double wmax);

/// (F2): a ceiling M with k* fbar(w) <= w for all w > M. Presets take the
/// ceilings used in the worked examples (w* on monotone branches, k* f(wbar)
/// otherwise); custom functions use a doubling scan. Both are then verified on
/// [M, 4M].
F2Result check_F2(const BirthFunction& f, double kstar);

/// (F3): f(w)/w strictly decreasing on (0, M] (10^4 log-spaced samples) and
/// p k* > 1.
Verdict check_F3(const BirthFunction& f, double kstar, double M);

/// Sufficient conditions for property (P), tested in order P0, P1, P2 on
/// 10^4-point grids; also runs the brute-force scan with n = 200.
PConditionReport check_P_conditions(const BirthFunction& f, double kstar, double wstar, double M);

/// All (u, v) on an n x n grid of (0, w*] x [w*, M] with
/// u >= k* f(v) - eps, v <= k* f(u) + eps and v - u > delta.
std::vector<std::pair<double, double>> property_P_bruteforce(const BirthFunction& f, double kstar,
                                                             double wstar, double M, std::size_t n,
                                                             double eps = 1e-9, double delta = 1e-6);

/// Two-argument envelope: min f on [u, v] if u <= v, max f on [v, u] otherwise.
double fluctuation_F(const BirthFunction& f, double u, double v, double M);

/// Exact evaluation of the sufficiency thresholds for the three presets.
/// Throws UnsupportedError for linear/table kinds.
TheoremVerdict theorem_threshold(const BirthFunction& f, double kstar);

/// Runs every check above and assembles the report. covered implies
/// f1 && f2 && f3.
HypothesisReport check_hypotheses(const BirthFunction& f, double kstar);

} // namespace agedelay
