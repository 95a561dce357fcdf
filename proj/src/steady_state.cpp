#include "agedelay/steady_state.hpp"

#include "agedelay/errors.hpp"

#include <algorithm>
#include <cmath>

namespace agedelay
{

namespace
{

std::vector<double> scan_grid(double M)
{
    constexpr int uniform = 4096;
    constexpr int logarithmic = 256;
    std::vector<double> grid;
    grid.reserve(uniform + logarithmic);
    const double first = M / uniform;
    const double lo = first * 1e-12;
    for (int i = 0; i < logarithmic; ++i)
        grid.push_back(lo * std::pow(first / lo, static_cast<double>(i) / logarithmic));
    for (int i = 1; i <= uniform; ++i)
        grid.push_back(M * static_cast<double>(i) / uniform);
    grid.back() = M;
    return grid;
}

double bisect(const auto& F, double lo, double hi)
{
    double f_lo = F(lo);
    for (int iter = 0; iter < 200; ++iter)
    {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        const double f_mid = F(mid);
        if (f_mid == 0.0)
            return mid;
        if ((f_mid > 0.0) == (f_lo > 0.0))
        {
            lo = mid;
            f_lo = f_mid;
        }
        else
            hi = mid;
    }
    return std::abs(F(lo)) <= std::abs(F(hi)) ? lo : hi;
}

} // namespace

SteadyStateReport find_steady_states(const BirthFunction& f, double kstar, double M)
{
    if (!(kstar > 0.0) || !(M > 0.0))
        throw DomainError("find_steady_states: k* and M must be positive");

    SteadyStateReport report;
    report.M_used = M;
    if (!(f.p() * kstar > 1.0))
    {
        report.note = "p*k* <= 1: no positive steady state";
        return report;
    }

    auto F = [&](double w) { return kstar * f(w) - w; };
    auto at_rounding = [&](double w, double value) {
        const double scale = std::max(w, std::abs(kstar * f(w)));
        return std::abs(value) <= 64.0 * 2.220446049250313e-16 * scale;
    };

    const auto grid = scan_grid(M);
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        values[i] = F(grid[i]);

    std::vector<double> roots;
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        if (at_rounding(grid[i], values[i]))
        {
            roots.push_back(grid[i]);
            continue;
        }
        if (i + 1 < grid.size() && !at_rounding(grid[i + 1], values[i + 1])
            && (values[i] > 0.0) != (values[i + 1] > 0.0))
            roots.push_back(bisect(F, grid[i], grid[i + 1]));
    }

    // Collapse duplicates from adjacent rounding-level grid points.
    std::sort(roots.begin(), roots.end());
    std::vector<double> unique_roots;
    for (double w : roots)
        if (unique_roots.empty() || w - unique_roots.back() > 1e-9 * std::max(1.0, w))
            unique_roots.push_back(w);

    if (unique_roots.empty())
        throw InconsistencyError("find_steady_states: p*k* > 1 but k* f(w) - w has no sign change on "
                                 "(0, M]; M is too small or f violates (F1)/(F2)");

    report.roots = std::move(unique_roots);
    for (double w : report.roots)
        report.residuals.push_back(std::abs(F(w)));
    report.unique = report.roots.size() == 1;
    return report;
}

double closed_form_wstar(const BirthFunction& f, double kstar)
{
    return f.closed_form_fixed_point(kstar);
}

} // namespace agedelay
