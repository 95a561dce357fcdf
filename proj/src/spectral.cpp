#include "agedelay/spectral.hpp"

#include "agedelay/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace agedelay
{

std::string_view to_string(StabilityClass c)
{
    switch (c)
    {
    case StabilityClass::extinction: return "extinction";
    case StabilityClass::persistence: return "persistence";
    case StabilityClass::critical: return "critical";
    }
    return "?";
}

CharacteristicFunction::CharacteristicFunction(AgeRates rates, double panels_per_unit_age)
    : rates_(std::move(rates)), panels_per_unit_age_(panels_per_unit_age)
{
    if (!(panels_per_unit_age_ > 0.0))
        throw DomainError("characteristic function: panels per unit age must be positive");
}

double CharacteristicFunction::gamma0_at(double lambda, double width_scale) const
{
    if (!std::isfinite(lambda))
        throw DomainError("gamma0: lambda must be finite");
    if (std::abs(lambda) * rates_.life_span() > 700.0)
        throw RangeError("gamma0: |lambda| * life_span > 700 would overflow the exponential");

    double width = 1.0 / panels_per_unit_age_;
    if (std::abs(lambda) > 0.0)
        width = std::min(width, 1.0 / std::abs(lambda));
    const auto rule = rates_.maturity_rule(width * width_scale);
    return rule.integrate([&](double a) { return std::exp(-(lambda * a + rates_.gamma(a))); });
}

double CharacteristicFunction::gamma0(double lambda) const
{
    return gamma0_at(lambda, 1.0);
}

double CharacteristicFunction::gamma0_relative_self_check(double lambda) const
{
    const double coarse = gamma0_at(lambda, 1.0);
    const double fine = gamma0_at(lambda, 0.5);
    return std::abs(coarse - fine) / fine;
}

double CharacteristicFunction::principal_eigenvalue(double p) const
{
    if (!(p > 0.0) || !std::isfinite(p))
        throw DomainError("principal_eigenvalue: p must be positive and finite");

    auto residual = [&](double lambda) { return p * gamma0(lambda) - 1.0; };

    const double log_pk = std::log(p * gamma0(0.0));
    double lo = std::min(log_pk / rates_.r(), log_pk / rates_.life_span());
    double hi = std::max(log_pk / rates_.r(), log_pk / rates_.life_span());

    // Widen by rounding-level amounts if the endpoint residuals disagree with
    // the analytic bounds.
    double pad = 1e-12 * std::max(1.0, std::abs(hi - lo));
    int widenings = 0;
    while (!(residual(lo) >= 0.0 && residual(hi) <= 0.0))
    {
        if (++widenings > 60)
        {
            std::ostringstream os;
            os.precision(17);
            os << "principal_eigenvalue: no sign change on [" << lo << ", " << hi
               << "] (residuals " << residual(lo) << ", " << residual(hi) << ", p=" << p << ")";
            throw ConvergenceError(os.str());
        }
        lo -= pad;
        hi += pad;
        pad *= 2.0;
    }

    for (int iter = 0; iter < 200; ++iter)
    {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (residual(mid) >= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double r_lo = std::abs(residual(lo));
    const double r_hi = std::abs(residual(hi));
    const double lambda0 = r_lo <= r_hi ? lo : hi;
    const double res = std::min(r_lo, r_hi);
    if (!(res < 1e-10))
    {
        std::ostringstream os;
        os.precision(17);
        os << "principal_eigenvalue: residual " << res << " at lambda=" << lambda0 << " exceeds 1e-10";
        throw ConvergenceError(os.str());
    }
    return lambda0;
}

StabilityClass CharacteristicFunction::classify(double p) const
{
    const double pk = p * rates_.kstar();
    if (pk < 1.0 - critical_band)
        return StabilityClass::extinction;
    if (pk > 1.0 + critical_band)
        return StabilityClass::persistence;
    return StabilityClass::critical;
}

} // namespace agedelay
