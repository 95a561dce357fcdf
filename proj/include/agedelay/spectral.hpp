#pragma once

#include "agedelay/age_rates.hpp"

#include <string_view>

namespace agedelay
{

enum class StabilityClass
{
    extinction,  ///< p k* < 1: zero state linearly stable, lambda0 < 0
    persistence, ///< p k* > 1: zero state unstable, lambda0 > 0
    critical,    ///< |p k* - 1| <= 1e-9
};

std::string_view to_string(StabilityClass c);

/// Gamma0(lambda) = int_r^{A_l} exp(-(lambda a + gamma(a))) da, the
/// characteristic function of the linearization about w = 0 restricted to
/// spatially constant modes. The principal eigenvalue lambda0 solves
/// p Gamma0(lambda0) = 1.
class CharacteristicFunction
{
public:
    /// panels_per_unit_age sets the base composite Gauss-Legendre resolution;
    /// panels are refined further so that |lambda| * width <= 1.
    explicit CharacteristicFunction(AgeRates rates, double panels_per_unit_age = 8.0);

    const AgeRates& rates() const { return rates_; }

    /// Throws RangeError when |lambda| * A_l > 700.
    double gamma0(double lambda) const;

    /// |Gamma0_h - Gamma0_{h/2}| / Gamma0_{h/2}.
    double gamma0_relative_self_check(double lambda) const;

    /// Bisection on the bracket [ln(pk*)/A_l, ln(pk*)/r] (ordered), which the
    /// exponential bounds on Gamma0 guarantee to contain the root.
    /// Throws ConvergenceError if the bracket does not change sign or the
    /// final residual |p Gamma0 - 1| exceeds 1e-10.
    double principal_eigenvalue(double p) const;

    StabilityClass classify(double p) const;

    static constexpr double critical_band = 1e-9;

private:
    double gamma0_at(double lambda, double width_scale) const;

    AgeRates rates_;
    double panels_per_unit_age_;
};

} // namespace agedelay
