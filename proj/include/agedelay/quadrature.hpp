#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace agedelay
{

/// Nodes and weights of a 1-D quadrature rule.
struct QuadratureRule
{
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }

    template <typename F>
    double integrate(F&& f) const
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            sum += weights[i] * f(nodes[i]);
        return sum;
    }
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
QuadratureRule gauss_legendre(std::size_t n);

/// Composite Gauss-Legendre rule on [breaks.front(), breaks.back()].
///
/// Every segment between consecutive breaks is split into equal panels no
/// wider than max_panel_width, and each panel carries an `order`-point rule.
/// Panels never straddle a break, so integrands that are smooth between
/// breaks keep spectral accuracy.
QuadratureRule composite_gauss_legendre(std::span<const double> breaks, double max_panel_width,
                                        std::size_t order = 8);

/// Composite Gauss-Legendre rule with exactly `panels` equal panels on [lo, hi].
QuadratureRule composite_gauss_legendre(double lo, double hi, std::size_t panels,
                                        std::size_t order = 8);

/// Trapezoid rule with `intervals` equal intervals on [lo, hi] (intervals + 1 nodes).
QuadratureRule trapezoid(double lo, double hi, std::size_t intervals);

} // namespace agedelay
