#pragma once

#include "agedelay/quadrature.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace agedelay
{

enum class ProfileKind
{
    constant,
    piecewise_constant,
    polynomial,
    tabulated,
};

std::string_view to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(std::string_view name);

/// An age-dependent rate a -> D(a) or a -> d(a).
///
/// Kinds and their parameter layout:
///   constant            params = {c}
///   piecewise_constant  params = {v_0, ..., v_n}, breakpoints = {b_1 < ... < b_n};
///                       value v_i on [b_i, b_{i+1}) with b_0 = 0, b_{n+1} = +inf
///   polynomial          params = {c_0, c_1, ...}, value sum c_k a^k
///   tabulated           params = values, breakpoints = ages (strictly increasing);
///                       linear between nodes, held constant outside
///
/// All kinds have closed-form antiderivatives, so integral() is exact up to
/// rounding.
class RateProfile
{
public:
    static RateProfile constant(double value);
    static RateProfile piecewise_constant(std::vector<double> values, std::vector<double> breakpoints);
    static RateProfile polynomial(std::vector<double> coefficients);
    static RateProfile tabulated(std::vector<double> ages, std::vector<double> values);

    ProfileKind kind() const { return kind_; }
    const std::vector<double>& params() const { return params_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    double value(double a) const;

    /// Integral of the profile over [0, a].
    double integral(double a) const;

    /// Ages where the profile (or its derivative) is not smooth.
    std::vector<double> kinks() const;

    /// Throws DomainError unless the profile is finite and nonnegative on
    /// [0, life_span] and its breakpoints lie in [0, life_span].
    void validate(double life_span, std::string_view name) const;

    friend bool operator==(const RateProfile&, const RateProfile&) = default;

private:
    RateProfile(ProfileKind kind, std::vector<double> params, std::vector<double> breakpoints);

    ProfileKind kind_;
    std::vector<double> params_;
    std::vector<double> breakpoints_;
};

/// Maturation age r, life span A_l and start time t0.
struct ModelParams
{
    double r = 1.0;
    double life_span = 2.0;
    double t0 = 2.0;

    /// Throws DomainError unless 0 < r < life_span and t0 >= life_span.
    void validate() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Age profiles D, d together with the derived survival quantities
///   alpha(a) = int_0^a D,  gamma(a) = int_0^a d,  beta(a) = exp(-gamma(a)),
///   k* = int_r^{A_l} beta(a) da.
///
/// Immutable after construction.
class AgeRates
{
public:
    /// max_panel_width controls the composite Gauss-Legendre rule used for k*.
    AgeRates(RateProfile diffusion, RateProfile death, ModelParams params,
             double max_panel_width = 0.25);

    const RateProfile& diffusion() const { return diffusion_; }
    const RateProfile& death() const { return death_; }
    const ModelParams& params() const { return params_; }
    double r() const { return params_.r; }
    double life_span() const { return params_.life_span; }

    double alpha(double a) const;
    double gamma(double a) const;
    double beta(double a) const;

    double kstar() const { return kstar_; }

    /// |k*(h) - k*(h/2)| / k*(h/2) measured at construction.
    double kstar_relative_self_check() const { return kstar_self_check_; }

    /// {r, interior kinks of d, A_l}: panel boundaries for integrals over maturity.
    std::vector<double> maturity_breaks() const;

    /// Composite Gauss-Legendre rule on [r, A_l] with panels aligned to maturity_breaks().
    QuadratureRule maturity_rule(double max_panel_width, std::size_t order = 8) const;

private:
    void check_age(double a) const;

    RateProfile diffusion_;
    RateProfile death_;
    ModelParams params_;
    double kstar_ = 0.0;
    double kstar_self_check_ = 0.0;
};

} // namespace agedelay
