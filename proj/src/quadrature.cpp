#include "agedelay/quadrature.hpp"

#include "agedelay/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace agedelay
{

QuadratureRule gauss_legendre(std::size_t n)
{
    if (n == 0)
        throw DomainError("gauss_legendre: need at least one node");

    QuadratureRule rule;
    if (n == 1)
    {
        rule.nodes = {0.0};
        rule.weights = {2.0};
        return rule;
    }
    rule.nodes.resize(n);
    rule.weights.resize(n);

    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i)
    {
        // Tricomi initial guess for the i-th largest root.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75)
                            / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter)
        {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k)
            {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        rule.nodes[n / 2] = 0.0;
    return rule;
}

namespace
{

void append_panels(QuadratureRule& out, const QuadratureRule& ref, double lo, double hi,
                   std::size_t panels)
{
    const double width = (hi - lo) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p)
    {
        const double a = lo + width * static_cast<double>(p);
        const double b = (p + 1 == panels) ? hi : a + width;
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        for (std::size_t k = 0; k < ref.size(); ++k)
        {
            out.nodes.push_back(mid + half * ref.nodes[k]);
            out.weights.push_back(half * ref.weights[k]);
        }
    }
}

} // namespace

QuadratureRule composite_gauss_legendre(std::span<const double> breaks, double max_panel_width,
                                        std::size_t order)
{
    if (breaks.size() < 2)
        throw DomainError("composite_gauss_legendre: need at least two breaks");
    if (!(max_panel_width > 0.0))
        throw DomainError("composite_gauss_legendre: panel width must be positive");

    const QuadratureRule ref = gauss_legendre(order);
    QuadratureRule out;
    for (std::size_t s = 0; s + 1 < breaks.size(); ++s)
    {
        const double lo = breaks[s];
        const double hi = breaks[s + 1];
        if (!(hi > lo))
        {
            if (hi == lo)
                continue;
            throw DomainError("composite_gauss_legendre: breaks must be increasing");
        }
        const auto panels =
            static_cast<std::size_t>(std::max(1.0, std::ceil((hi - lo) / max_panel_width - 1e-12)));
        append_panels(out, ref, lo, hi, panels);
    }
    return out;
}

QuadratureRule composite_gauss_legendre(double lo, double hi, std::size_t panels, std::size_t order)
{
    if (panels == 0 || !(hi > lo))
        throw DomainError("composite_gauss_legendre: need hi > lo and at least one panel");
    QuadratureRule out;
    append_panels(out, gauss_legendre(order), lo, hi, panels);
    return out;
}

QuadratureRule trapezoid(double lo, double hi, std::size_t intervals)
{
    if (intervals == 0 || !(hi > lo))
        throw DomainError("trapezoid: need hi > lo and at least one interval");
    QuadratureRule rule;
    rule.nodes.resize(intervals + 1);
    rule.weights.assign(intervals + 1, (hi - lo) / static_cast<double>(intervals));
    for (std::size_t i = 0; i <= intervals; ++i)
        rule.nodes[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(intervals);
    rule.nodes.back() = hi;
    rule.weights.front() *= 0.5;
    rule.weights.back() *= 0.5;
    return rule;
}

} // namespace agedelay
