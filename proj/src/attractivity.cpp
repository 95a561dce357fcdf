#include "agedelay/attractivity.hpp"

#include "agedelay/errors.hpp"
#include "agedelay/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace agedelay
{

std::string_view to_string(PCondition c)
{
    switch (c)
    {
    case PCondition::P0: return "P0";
    case PCondition::P1: return "P1";
    case PCondition::P2: return "P2";
    case PCondition::brute_force_only: return "brute-force-only";
    case PCondition::fail: return "fail";
    }
    return "?";
}

namespace
{

constexpr std::size_t check_samples = 10000;

std::vector<double> uniform_grid(double lo, double hi, std::size_t n)
{
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    g.back() = hi;
    return g;
}

/// n log-spaced points in [hi * 1e-6, hi].
std::vector<double> log_grid(double hi, std::size_t n)
{
    const double lo = hi * 1e-6;
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
    g.back() = hi;
    return g;
}

double slack_for(const std::vector<double>& values)
{
    double scale = 1.0;
    for (double v : values)
        scale = std::max(scale, std::abs(v));
    return monotone_slack * scale;
}

/// Index of the first step that rises by more than slack, or npos.
std::size_t first_rise(const std::vector<double>& values, double slack)
{
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        if (values[i + 1] > values[i] + slack)
            return i + 1;
    return std::string::npos;
}

/// Strict decrease up to slack-sized plateaus: no step rises by more than the
/// slack and the total drop exceeds it.
bool strictly_decreasing(const std::vector<double>& values, double slack)
{
    return first_rise(values, slack) == std::string::npos && values.front() - values.back() > slack;
}

bool non_increasing(const std::vector<double>& values, double slack)
{
    return first_rise(values, slack) == std::string::npos;
}

std::vector<double> negate(std::vector<double> v)
{
    for (double& x : v)
        x = -x;
    return v;
}

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

/// Verifies k* fbar(w) <= w on [M, 4M].
void verify_F2_ray(const BirthFunction& f, double kstar, double M, Verdict& verdict)
{
    for (double w : uniform_grid(M, 4.0 * M, 4097))
    {
        const double lhs = kstar * f.running_max(w);
        if (lhs > w + monotone_slack * std::max(1.0, w))
        {
            verdict.fail("k* fbar(w) > w on [M, 4M]", w);
            return;
        }
    }
}

double golden_extremum(const BirthFunction& f, double lo, double hi, bool maximize)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    auto score = [&](double w) { return maximize ? f(w) : -f(w); };
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = score(c);
    double fd = score(d);
    for (int iter = 0; iter < 100 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++iter)
    {
        if (fc > fd)
        {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = score(c);
        }
        else
        {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = score(d);
        }
    }
    return f(0.5 * (a + b));
}

} // namespace

Verdict check_F1(const BirthFunction& f, double wmax)
{
    if (!(wmax > 0.0))
        throw DomainError("check_F1: wmax must be positive");
    Verdict v;
    const double p = f.p();

    const double f0 = f(0.0);
    if (std::abs(f0) > monotone_slack)
        v.fail("f(0) != 0", 0.0);
    if (!(p > 0.0))
        v.fail("f'(0) = p must be positive", 0.0);

    const auto grid = uniform_grid(0.0, wmax, check_samples);
    double lipschitz = 0.0;
    double prev = f0;
    for (std::size_t i = 1; i < grid.size(); ++i)
    {
        const double fw = f(grid[i]);
        if (!std::isfinite(fw))
        {
            v.fail("f not finite", grid[i]);
            break;
        }
        lipschitz = std::max(lipschitz, std::abs(fw - prev) / (grid[i] - grid[i - 1]));
        prev = fw;
        if (fw > p * grid[i] + monotone_slack)
        {
            v.fail("f(w) > p w", grid[i]);
            break;
        }
    }
    if (!std::isfinite(lipschitz) || lipschitz > 1e12)
        v.fail("difference quotients unbounded (not Lipschitz)");

    // One-sided difference quotients at the origin over ten decades of h: they
    // must either sit within 1e-4 of p or close in on it monotonically
    // (w^q corrections with small q converge slowly).
    std::vector<double> gaps;
    for (int k = 3; k <= 12; ++k)
    {
        const double h = std::pow(10.0, -k) * wmax;
        gaps.push_back(std::abs((f(h) - f0) / h - p));
    }
    const double scale = std::max(1.0, std::abs(p));
    bool closing = gaps.back() < 0.5 * gaps.front();
    for (std::size_t i = 1; i < gaps.size(); ++i)
        closing = closing && gaps[i] <= gaps[i - 1] + 1e-6 * scale;
    if (!(gaps.back() <= 1e-4 * scale || closing))
        v.fail("one-sided slope at 0 does not approach p", 0.0);

    if (v.ok)
        v.evidence = {0.0, wmax, lipschitz};
    return v;
}

F2Result check_F2(const BirthFunction& f, double kstar)
{
    if (!(kstar > 0.0))
        throw DomainError("check_F2: k* must be positive");
    F2Result result;
    const double pk = f.p() * kstar;

    if (f.kind() == BirthKind::ricker || f.kind() == BirthKind::beverton_holt
        || f.kind() == BirthKind::logistic)
    {
        result.method = "closed-form";
        const auto lm = f.landmarks();
        double M = 0.0;
        if (pk > 1.0)
        {
            const double wstar = f.closed_form_fixed_point(kstar);
            // Monotone branch when w* sits left of the hump; otherwise the
            // global bound k* f(wbar).
            if (!lm.wbar || wstar <= *lm.wbar)
                M = wstar;
            else
                M = kstar * *lm.fmax;
        }
        else if (lm.fmax)
        {
            M = kstar * *lm.fmax;
        }
        else
        {
            // Monotone f with p k* <= 1: k* f(w) <= p k* w <= w everywhere.
            M = 1.0;
        }
        verify_F2_ray(f, kstar, M, result.verdict);
        if (result.verdict.ok)
        {
            result.M = M;
            result.verdict.evidence = {M, 4.0 * M};
        }
        return result;
    }

    result.method = "scan";
    constexpr std::size_t n = 4096;
    for (double W = 1.0; W <= 1e12; W *= 2.0)
    {
        const auto grid = uniform_grid(W / n, 4.0 * W, 4 * n);
        std::size_t last_violation = std::string::npos;
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (kstar * f.running_max(grid[i]) > grid[i] + monotone_slack * std::max(1.0, grid[i]))
                last_violation = i;
        if (last_violation != std::string::npos && grid[last_violation] >= W)
            continue;
        const double M = last_violation == std::string::npos ? grid.front() : grid[last_violation + 1];
        Verdict v;
        verify_F2_ray(f, kstar, M, v);
        if (v.ok)
        {
            result.M = M;
            result.verdict.evidence = {M, 4.0 * M};
            return result;
        }
    }
    result.verdict.fail("no ceiling M <= 1e12 with k* fbar(w) <= w beyond it");
    return result;
}

Verdict check_F3(const BirthFunction& f, double kstar, double M)
{
    if (!(M > 0.0))
        throw DomainError("check_F3: M must be positive");
    Verdict v;
    const auto grid = log_grid(M, check_samples);
    std::vector<double> ratio(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        ratio[i] = f(grid[i]) / grid[i];
    const double slack = slack_for(ratio);
    if (const auto i = first_rise(ratio, slack); i != std::string::npos)
        v.fail("f(w)/w increases", grid[i]);
    else if (!strictly_decreasing(ratio, slack))
        v.fail("f(w)/w is not strictly decreasing (flat)", M);
    if (!(f.p() * kstar > 1.0))
        v.fail("p k* <= 1");
    if (v.ok)
        v.evidence = {grid.front(), M};
    return v;
}

std::vector<std::pair<double, double>> property_P_bruteforce(const BirthFunction& f, double kstar,
                                                             double wstar, double M, std::size_t n,
                                                             double eps, double delta)
{
    if (!(wstar > 0.0) || !(wstar <= M) || n < 2)
        throw DomainError("property_P_bruteforce: need 0 < w* <= M and n >= 2");
    std::vector<double> us(n);
    std::vector<double> ku(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        us[i] = wstar * static_cast<double>(i + 1) / static_cast<double>(n);
        ku[i] = kstar * f(us[i]);
    }
    std::vector<double> vs = uniform_grid(wstar, M, n);
    std::vector<double> kv(n);
    for (std::size_t j = 0; j < n; ++j)
        kv[j] = kstar * f(vs[j]);

    std::vector<std::pair<double, double>> violations;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (us[i] >= kv[j] - eps && vs[j] <= ku[i] + eps && vs[j] - us[i] > delta)
                violations.emplace_back(us[i], vs[j]);
    return violations;
}

PConditionReport check_P_conditions(const BirthFunction& f, double kstar, double wstar, double M)
{
    if (!(wstar > 0.0) || !(M >= wstar))
        throw DomainError("check_P_conditions: need 0 < w* <= M");
    PConditionReport report;

    // P0: f non-decreasing on [0, M].
    {
        const auto grid = uniform_grid(0.0, M, check_samples);
        std::vector<double> fv(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            fv[i] = f(grid[i]);
        report.p0 = non_increasing(negate(fv), slack_for(fv));
    }
    // P1: w f(w) strictly increasing on (0, M].
    {
        const auto grid = uniform_grid(M / check_samples, M, check_samples);
        std::vector<double> wf(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            wf[i] = grid[i] * f(grid[i]);
        report.p1 = strictly_decreasing(negate(wf), slack_for(wf));
    }
    // P2: f non-increasing on [w*, M] and f(k* f(w))/w strictly decreasing on (0, w*].
    {
        const auto right = uniform_grid(wstar, M, check_samples);
        std::vector<double> fv(right.size());
        for (std::size_t i = 0; i < right.size(); ++i)
            fv[i] = f(right[i]);
        const bool tail_ok = M == wstar || non_increasing(fv, slack_for(fv));

        const auto left = uniform_grid(wstar / check_samples, wstar, check_samples);
        std::vector<double> h(left.size());
        bool h_defined = true;
        for (std::size_t i = 0; i < left.size() && h_defined; ++i)
        {
            const double inner = kstar * f(left[i]);
            if (inner < 0.0)
                h_defined = false;
            else
                h[i] = f(inner) / left[i];
        }
        report.p2 = tail_ok && h_defined && strictly_decreasing(h, slack_for(h));
    }

    report.violations = property_P_bruteforce(f, kstar, wstar, M, 200);
    if (report.p0)
        report.which = PCondition::P0;
    else if (report.p1)
        report.which = PCondition::P1;
    else if (report.p2)
        report.which = PCondition::P2;
    else if (report.violations.empty())
        report.which = PCondition::brute_force_only;
    else
        report.which = PCondition::fail;
    return report;
}

double fluctuation_F(const BirthFunction& f, double u, double v, double M)
{
    if (!(u >= 0.0 && v >= 0.0 && u <= M && v <= M))
        throw DomainError("fluctuation_F: arguments must lie in [0, M]");
    if (u == v)
        return f(u);

    const bool maximize = v < u;
    const double lo = std::min(u, v);
    const double hi = std::max(u, v);
    constexpr std::size_t n = 1024;
    auto better = [&](double a, double b) { return maximize ? a > b : a < b; };

    std::size_t best_i = 0;
    double best = f(lo);
    for (std::size_t i = 1; i < n; ++i)
    {
        const double w = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        const double fw = f(w);
        if (better(fw, best))
        {
            best = fw;
            best_i = i;
        }
    }
    if (best_i == 0 || best_i == n - 1)
        return best;

    // Interior extremum: refine between the neighbouring grid points.
    const double step = (hi - lo) / static_cast<double>(n - 1);
    const double a = lo + step * static_cast<double>(best_i - 1);
    const double b = lo + step * static_cast<double>(best_i + 1);
    const double refined = golden_extremum(f, a, b, maximize);
    return better(refined, best) ? refined : best;
}

TheoremVerdict theorem_threshold(const BirthFunction& f, double kstar)
{
    TheoremVerdict t;
    const double pk = f.p() * kstar;
    switch (f.kind())
    {
    case BirthKind::ricker:
    {
        const double q = f.q();
        const double e1 = std::exp(1.0 / q);
        const double e2 = std::exp(2.0 / q);
        if (!(pk > 1.0))
        {
            t.branch = "ricker:no-positive-steady-state";
            t.condition = "p*k* = " + fmt(pk) + " <= 1";
        }
        else if (pk <= e1)
        {
            t.covered = true;
            t.branch = "ricker:P0-branch";
            t.condition = "1 < p*k* = " + fmt(pk) + " <= e^(1/q) = " + fmt(e1);
        }
        else if (pk <= e2)
        {
            t.covered = true;
            t.branch = "ricker:P2-branch";
            t.condition = "e^(1/q) = " + fmt(e1) + " < p*k* = " + fmt(pk) + " <= e^(2/q) = " + fmt(e2);
        }
        else
        {
            t.branch = "ricker:beyond-threshold";
            t.condition = "p*k* = " + fmt(pk) + " > e^(2/q) = " + fmt(e2);
        }
        return t;
    }
    case BirthKind::beverton_holt:
    {
        const double q = f.q();
        if (!(pk > 1.0))
        {
            t.branch = "beverton-holt:no-positive-steady-state";
            t.condition = "p*k* = " + fmt(pk) + " <= 1";
            return t;
        }
        const double qmax = std::max(2.0, pk / (pk - 1.0));
        if (q <= qmax)
        {
            t.covered = true;
            t.branch = "beverton-holt:q-range";
            t.condition = "q = " + fmt(q) + " in (0, max(2, pk*/(pk*-1))] = (0, " + fmt(qmax) + "]";
            return t;
        }
        const auto lm = f.landmarks();
        const double lhs = kstar * *lm.fmax;
        const double rhs = std::pow(2.0 / (f.a() * (q - 2.0)), 1.0 / q);
        t.covered = lhs <= rhs;
        t.branch = t.covered ? "beverton-holt:fbar-bound" : "beverton-holt:beyond-threshold";
        t.condition = "q = " + fmt(q) + " > " + fmt(qmax) + " and k* f(wbar) = " + fmt(lhs)
                      + (t.covered ? " <= " : " > ") + "(2/(a(q-2)))^(1/q) = " + fmt(rhs);
        return t;
    }
    case BirthKind::logistic:
    {
        if (!(pk > 1.0))
        {
            t.branch = "logistic:no-positive-steady-state";
            t.condition = "p*k* = " + fmt(pk) + " <= 1";
        }
        else if (pk <= 2.0)
        {
            t.covered = true;
            t.branch = "logistic:P0-branch";
            t.condition = "1 < p*k* = " + fmt(pk) + " <= 2";
        }
        else if (pk <= 3.0)
        {
            t.covered = true;
            t.branch = "logistic:P2-branch";
            t.condition = "2 < p*k* = " + fmt(pk) + " <= 3";
        }
        else
        {
            t.branch = "logistic:beyond-threshold";
            t.condition = "p*k* = " + fmt(pk) + " > 3";
        }
        return t;
    }
    case BirthKind::linear:
    case BirthKind::table:
        break;
    }
    throw UnsupportedError("theorem_threshold: only the ricker, beverton-holt and logistic presets "
                           "have closed-form thresholds; use the numeric checks");
}

HypothesisReport check_hypotheses(const BirthFunction& f, double kstar)
{
    HypothesisReport report;
    report.notes.push_back("coverage requires (F1), (F2) and (F3) together with a sufficient condition for "
                           "property (P); (F1)-(F2) alone are not accepted as sufficient");

    const auto f2 = check_F2(f, kstar);
    report.f2 = f2.verdict;
    report.M = f2.M;

    const double wmax = f2.verdict.ok ? 4.0 * f2.M : 1.0;
    report.f1 = check_F1(f, wmax);

    if (!f2.verdict.ok)
    {
        report.f3.fail("(F3) needs the (F2) ceiling M");
        report.notes.push_back("(F2) failed; (F3) and property (P) not evaluated");
    }
    else
    {
        report.f3 = check_F3(f, kstar, report.M);
        if (f.p() * kstar > 1.0)
        {
            const auto states = find_steady_states(f, kstar, report.M);
            if (!states.unique)
                report.notes.push_back("more than one positive steady state on (0, M]");
            report.wstar = f.is_preset() && f.kind() != BirthKind::linear
                               ? f.closed_form_fixed_point(kstar)
                               : states.roots.front();
            report.p_conditions = check_P_conditions(f, kstar, *report.wstar, report.M);
        }
        else
        {
            report.notes.push_back("p*k* <= 1: no positive steady state, property (P) not evaluated");
        }
    }

    const bool hypotheses = report.f1.ok && report.f2.ok && report.f3.ok;
    if (f.kind() == BirthKind::ricker || f.kind() == BirthKind::beverton_holt
        || f.kind() == BirthKind::logistic)
    {
        report.theorem = theorem_threshold(f, kstar);
        if (report.theorem.covered && !hypotheses)
        {
            report.theorem.covered = false;
            report.notes.push_back("threshold satisfied but a numeric hypothesis check failed");
        }
    }
    else
    {
        const auto which = report.p_conditions.which;
        report.theorem.covered = hypotheses && report.wstar
                                 && (which == PCondition::P0 || which == PCondition::P1
                                     || which == PCondition::P2);
        report.theorem.branch = "numeric";
        report.theorem.condition = "(F1)-(F3) and a sufficient condition for (P), checked numerically";
    }
    return report;
}

} // namespace agedelay
