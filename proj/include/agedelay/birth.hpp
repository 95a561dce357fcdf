#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace agedelay
{

enum class BirthKind
{
    ricker,        ///< f(w) = p w exp(-a w^q)
    beverton_holt, ///< f(w) = p w / (1 + a w^q)
    logistic,      ///< f(w) = p w (1 - w / K)
    linear,        ///< f(w) = p w  (linearization at the origin)
    table,         ///< piecewise-linear through (w_i, f_i), held constant past the last node
};

std::string_view to_string(BirthKind kind);
BirthKind birth_kind_from_string(std::string_view name);

/// Location and value of the interior maximum of a preset birth function.
/// Both are empty when f is monotone on [0, inf).
struct PresetLandmarks
{
    std::optional<double> wbar;
    std::optional<double> fmax;
};

class BirthFunction
{
public:
    static BirthFunction ricker(double p, double a, double q);
    static BirthFunction beverton_holt(double p, double a, double q);
    static BirthFunction logistic(double p, double K);
    static BirthFunction linear(double p);
    /// Nodes must start at w = 0 and be strictly increasing in w.
    static BirthFunction table(std::vector<std::pair<double, double>> nodes);

    BirthKind kind() const { return kind_; }
    bool is_preset() const { return kind_ != BirthKind::table; }

    /// f'(0). For tables, the slope of the first segment.
    double p() const { return p_; }
    double a() const { return a_; }
    double q() const { return q_; }
    double K() const { return K_; }
    const std::vector<std::pair<double, double>>& nodes() const { return nodes_; }

    /// Raw formula value; the logistic preset goes negative past K.
    double operator()(double w) const;
    double eval(double w) const { return (*this)(w); }

    /// Analytic derivative (one-sided from the right at table nodes).
    double derivative(double w) const;

    /// max of f over [0, w].
    double running_max(double w) const;

    /// Throws UnsupportedError for tables.
    PresetLandmarks landmarks() const;

    /// Positive root of k* f(w) = w from the closed forms of the presets.
    /// Throws DomainError when p k* <= 1 and UnsupportedError for
    /// linear/table kinds.
    double closed_form_fixed_point(double kstar) const;

    std::string describe() const;

    friend bool operator==(const BirthFunction&, const BirthFunction&) = default;

private:
    BirthFunction(BirthKind kind, double p, double a, double q, double K);

    BirthKind kind_;
    double p_ = 0.0;
    double a_ = 0.0;
    double q_ = 1.0;
    double K_ = 0.0;
    std::vector<std::pair<double, double>> nodes_;
};

} // namespace agedelay
