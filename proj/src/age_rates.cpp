#include "agedelay/age_rates.hpp"

#include "agedelay/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace agedelay
{

std::string_view to_string(ProfileKind kind)
{
    switch (kind)
    {
    case ProfileKind::constant: return "constant";
    case ProfileKind::piecewise_constant: return "piecewise-constant";
    case ProfileKind::polynomial: return "polynomial";
    case ProfileKind::tabulated: return "tabulated";
    }
    return "?";
}

ProfileKind profile_kind_from_string(std::string_view name)
{
    if (name == "constant")
        return ProfileKind::constant;
    if (name == "piecewise-constant")
        return ProfileKind::piecewise_constant;
    if (name == "polynomial")
        return ProfileKind::polynomial;
    if (name == "tabulated")
        return ProfileKind::tabulated;
    throw DomainError("unknown rate profile kind '" + std::string(name)
                      + "' (expected constant, piecewise-constant, polynomial or tabulated)");
}

RateProfile::RateProfile(ProfileKind kind, std::vector<double> params, std::vector<double> breakpoints)
    : kind_(kind), params_(std::move(params)), breakpoints_(std::move(breakpoints))
{
    for (double v : params_)
        if (!std::isfinite(v))
            throw DomainError("rate profile: parameters must be finite");
    for (std::size_t i = 0; i < breakpoints_.size(); ++i)
    {
        if (!std::isfinite(breakpoints_[i]))
            throw DomainError("rate profile: breakpoints must be finite");
        if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1]))
            throw DomainError("rate profile: breakpoints must be strictly increasing");
    }
}

RateProfile RateProfile::constant(double value)
{
    return RateProfile(ProfileKind::constant, {value}, {});
}

RateProfile RateProfile::piecewise_constant(std::vector<double> values, std::vector<double> breakpoints)
{
    if (values.size() != breakpoints.size() + 1)
        throw DomainError("piecewise-constant profile: need one more value than breakpoints");
    return RateProfile(ProfileKind::piecewise_constant, std::move(values), std::move(breakpoints));
}

RateProfile RateProfile::polynomial(std::vector<double> coefficients)
{
    if (coefficients.empty())
        throw DomainError("polynomial profile: need at least one coefficient");
    return RateProfile(ProfileKind::polynomial, std::move(coefficients), {});
}

RateProfile RateProfile::tabulated(std::vector<double> ages, std::vector<double> values)
{
    if (ages.empty() || ages.size() != values.size())
        throw DomainError("tabulated profile: ages and values must be nonempty and of equal length");
    return RateProfile(ProfileKind::tabulated, std::move(values), std::move(ages));
}

double RateProfile::value(double a) const
{
    switch (kind_)
    {
    case ProfileKind::constant:
        return params_[0];
    case ProfileKind::piecewise_constant:
    {
        const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), a);
        return params_[static_cast<std::size_t>(it - breakpoints_.begin())];
    }
    case ProfileKind::polynomial:
    {
        double v = 0.0;
        for (auto c = params_.rbegin(); c != params_.rend(); ++c)
            v = v * a + *c;
        return v;
    }
    case ProfileKind::tabulated:
    {
        const auto& ages = breakpoints_;
        if (a <= ages.front())
            return params_.front();
        if (a >= ages.back())
            return params_.back();
        const auto hi = static_cast<std::size_t>(std::upper_bound(ages.begin(), ages.end(), a) - ages.begin());
        const std::size_t lo = hi - 1;
        const double s = (a - ages[lo]) / (ages[hi] - ages[lo]);
        return params_[lo] + s * (params_[hi] - params_[lo]);
    }
    }
    return 0.0;
}

double RateProfile::integral(double a) const
{
    switch (kind_)
    {
    case ProfileKind::constant:
        return params_[0] * a;
    case ProfileKind::piecewise_constant:
    {
        double sum = 0.0;
        double left = 0.0;
        for (std::size_t i = 0; i < breakpoints_.size(); ++i)
        {
            const double right = breakpoints_[i];
            if (right <= left)
                continue;
            if (a <= right)
                return sum + params_[i] * (a - left);
            sum += params_[i] * (right - left);
            left = right;
        }
        return sum + params_.back() * (a - left);
    }
    case ProfileKind::polynomial:
    {
        double v = 0.0;
        for (std::size_t k = params_.size(); k-- > 0;)
            v = v * a + params_[k] / static_cast<double>(k + 1);
        return v * a;
    }
    case ProfileKind::tabulated:
    {
        // Linear between nodes, so the trapezoid rule is exact per segment.
        double sum = 0.0;
        double left = 0.0;
        for (double node : breakpoints_)
        {
            if (node <= left)
                continue;
            if (node >= a)
                break;
            sum += 0.5 * (value(left) + value(node)) * (node - left);
            left = node;
        }
        return sum + 0.5 * (value(left) + value(a)) * (a - left);
    }
    }
    return 0.0;
}

std::vector<double> RateProfile::kinks() const
{
    if (kind_ == ProfileKind::piecewise_constant || kind_ == ProfileKind::tabulated)
        return breakpoints_;
    return {};
}

void RateProfile::validate(double life_span, std::string_view name) const
{
    const std::string label(name);
    for (double b : breakpoints_)
        if (b < 0.0 || b > life_span)
            throw DomainError(label + ": breakpoints must lie in [0, life_span]");

    // Sampled check; only polynomials can dip below zero between samples.
    auto check = [&](double a) {
        const double v = value(a);
        if (!std::isfinite(v) || v < 0.0)
            throw DomainError(label + ": rate must be finite and nonnegative on [0, life_span]");
    };
    constexpr int samples = 4096;
    for (int i = 0; i <= samples; ++i)
        check(life_span * static_cast<double>(i) / samples);
    for (double b : breakpoints_)
        check(b);
}

void ModelParams::validate() const
{
    if (!(std::isfinite(r) && std::isfinite(life_span) && std::isfinite(t0)))
        throw DomainError("model parameters must be finite");
    if (!(r > 0.0))
        throw DomainError("maturation age r must be positive: the method-of-steps integrator needs a positive delay");
    if (!(life_span > r))
        throw DomainError("life_span must exceed the maturation age r");
    if (!(t0 >= life_span))
        throw DomainError("start time t0 must be >= life_span");
}

AgeRates::AgeRates(RateProfile diffusion, RateProfile death, ModelParams params, double max_panel_width)
    : diffusion_(std::move(diffusion)), death_(std::move(death)), params_(params)
{
    params_.validate();
    diffusion_.validate(params_.life_span, "diffusion");
    death_.validate(params_.life_span, "death");
    if (!(alpha(params_.r) > 0.0))
        throw DomainError("immature diffusion must be positive somewhere in [0, r] (alpha(r) > 0)");

    auto kstar_at = [this](double width) {
        return maturity_rule(width).integrate([this](double a) { return beta(a); });
    };
    kstar_ = kstar_at(max_panel_width);
    const double refined = kstar_at(0.5 * max_panel_width);
    kstar_self_check_ = std::abs(kstar_ - refined) / refined;
}

void AgeRates::check_age(double a) const
{
    if (!(a >= 0.0 && a <= params_.life_span))
        throw DomainError("age " + std::to_string(a) + " outside [0, life_span]");
}

double AgeRates::alpha(double a) const
{
    check_age(a);
    return diffusion_.integral(a);
}

double AgeRates::gamma(double a) const
{
    check_age(a);
    return death_.integral(a);
}

double AgeRates::beta(double a) const
{
    return std::exp(-gamma(a));
}

std::vector<double> AgeRates::maturity_breaks() const
{
    std::vector<double> breaks{params_.r};
    for (double k : death_.kinks())
        if (k > params_.r && k < params_.life_span)
            breaks.push_back(k);
    breaks.push_back(params_.life_span);
    return breaks;
}

QuadratureRule AgeRates::maturity_rule(double max_panel_width, std::size_t order) const
{
    const auto breaks = maturity_breaks();
    return composite_gauss_legendre(breaks, max_panel_width, order);
}

} // namespace agedelay
