#include "agedelay/birth.hpp"

#include "agedelay/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace agedelay
{

std::string_view to_string(BirthKind kind)
{
    switch (kind)
    {
    case BirthKind::ricker: return "ricker";
    case BirthKind::beverton_holt: return "beverton-holt";
    case BirthKind::logistic: return "logistic";
    case BirthKind::linear: return "linear";
    case BirthKind::table: return "custom-table";
    }
    return "?";
}

BirthKind birth_kind_from_string(std::string_view name)
{
    if (name == "ricker")
        return BirthKind::ricker;
    if (name == "beverton-holt")
        return BirthKind::beverton_holt;
    if (name == "logistic")
        return BirthKind::logistic;
    if (name == "linear")
        return BirthKind::linear;
    if (name == "custom-table")
        return BirthKind::table;
    throw DomainError("unknown birth kind '" + std::string(name)
                      + "' (expected ricker, beverton-holt, logistic, linear or custom-table)");
}

namespace
{

void require_positive(double v, const char* what)
{
    if (!(std::isfinite(v) && v > 0.0))
        throw DomainError(std::string("birth function: ") + what + " must be positive and finite");
}

} // namespace

BirthFunction::BirthFunction(BirthKind kind, double p, double a, double q, double K)
    : kind_(kind), p_(p), a_(a), q_(q), K_(K)
{
}

BirthFunction BirthFunction::ricker(double p, double a, double q)
{
    require_positive(p, "p");
    require_positive(a, "a");
    require_positive(q, "q");
    return {BirthKind::ricker, p, a, q, 0.0};
}

BirthFunction BirthFunction::beverton_holt(double p, double a, double q)
{
    require_positive(p, "p");
    require_positive(a, "a");
    require_positive(q, "q");
    return {BirthKind::beverton_holt, p, a, q, 0.0};
}

BirthFunction BirthFunction::logistic(double p, double K)
{
    require_positive(p, "p");
    require_positive(K, "K");
    return {BirthKind::logistic, p, 0.0, 1.0, K};
}

BirthFunction BirthFunction::linear(double p)
{
    require_positive(p, "p");
    return {BirthKind::linear, p, 0.0, 1.0, 0.0};
}

BirthFunction BirthFunction::table(std::vector<std::pair<double, double>> nodes)
{
    if (nodes.size() < 2)
        throw DomainError("custom-table birth function: need at least two nodes");
    if (nodes.front().first != 0.0)
        throw DomainError("custom-table birth function: first node must be at w = 0");
    for (std::size_t i = 0; i < nodes.size(); ++i)
    {
        if (!std::isfinite(nodes[i].first) || !std::isfinite(nodes[i].second))
            throw DomainError("custom-table birth function: nodes must be finite");
        if (i > 0 && !(nodes[i].first > nodes[i - 1].first))
            throw DomainError("custom-table birth function: w must be strictly increasing");
    }
    const double slope = (nodes[1].second - nodes[0].second) / (nodes[1].first - nodes[0].first);
    BirthFunction f(BirthKind::table, slope, 0.0, 1.0, 0.0);
    f.nodes_ = std::move(nodes);
    return f;
}

double BirthFunction::operator()(double w) const
{
    if (!(w >= 0.0))
        throw DomainError("birth function evaluated at negative density");
    switch (kind_)
    {
    case BirthKind::ricker:
        return p_ * w * std::exp(-a_ * std::pow(w, q_));
    case BirthKind::beverton_holt:
        return p_ * w / (1.0 + a_ * std::pow(w, q_));
    case BirthKind::logistic:
        return p_ * w * (1.0 - w / K_);
    case BirthKind::linear:
        return p_ * w;
    case BirthKind::table:
    {
        if (w >= nodes_.back().first)
            return nodes_.back().second;
        const auto hi = std::upper_bound(nodes_.begin(), nodes_.end(), w,
                                         [](double v, const auto& n) { return v < n.first; });
        const auto lo = hi - 1;
        const double s = (w - lo->first) / (hi->first - lo->first);
        return lo->second + s * (hi->second - lo->second);
    }
    }
    return 0.0;
}

double BirthFunction::derivative(double w) const
{
    if (!(w >= 0.0))
        throw DomainError("birth function derivative at negative density");
    switch (kind_)
    {
    case BirthKind::ricker:
    {
        const double wq = std::pow(w, q_);
        return p_ * std::exp(-a_ * wq) * (1.0 - a_ * q_ * wq);
    }
    case BirthKind::beverton_holt:
    {
        const double wq = std::pow(w, q_);
        const double den = 1.0 + a_ * wq;
        return p_ * (1.0 + a_ * (1.0 - q_) * wq) / (den * den);
    }
    case BirthKind::logistic:
        return p_ * (1.0 - 2.0 * w / K_);
    case BirthKind::linear:
        return p_;
    case BirthKind::table:
    {
        if (w >= nodes_.back().first)
            return 0.0;
        const auto hi = std::upper_bound(nodes_.begin(), nodes_.end(), w,
                                         [](double v, const auto& n) { return v < n.first; });
        const auto lo = hi - 1;
        return (hi->second - lo->second) / (hi->first - lo->first);
    }
    }
    return 0.0;
}

double BirthFunction::running_max(double w) const
{
    const double fw = (*this)(w);
    if (kind_ == BirthKind::table)
    {
        double best = fw;
        for (const auto& [wn, fn] : nodes_)
        {
            if (wn > w)
                break;
            best = std::max(best, fn);
        }
        return best;
    }
    // Presets increase up to wbar and decrease after it.
    const auto lm = landmarks();
    if (lm.wbar && *lm.wbar <= w)
        return *lm.fmax;
    return fw;
}

PresetLandmarks BirthFunction::landmarks() const
{
    switch (kind_)
    {
    case BirthKind::ricker:
    {
        const double wbar = std::pow(1.0 / (a_ * q_), 1.0 / q_);
        const double fmax = p_ * std::pow(1.0 / (a_ * q_ * std::numbers::e), 1.0 / q_);
        return {wbar, fmax};
    }
    case BirthKind::beverton_holt:
    {
        if (q_ <= 1.0)
            return {};
        const double wbar = std::pow(1.0 / (a_ * (q_ - 1.0)), 1.0 / q_);
        return {wbar, p_ * (q_ - 1.0) / q_ * wbar};
    }
    case BirthKind::logistic:
        return {0.5 * K_, 0.25 * p_ * K_};
    case BirthKind::linear:
        return {};
    case BirthKind::table:
        throw UnsupportedError("landmarks: not available for custom-table birth functions");
    }
    return {};
}

double BirthFunction::closed_form_fixed_point(double kstar) const
{
    if (kind_ == BirthKind::table || kind_ == BirthKind::linear)
        throw UnsupportedError("closed-form steady state exists only for the ricker, "
                               "beverton-holt and logistic presets");
    const double pk = p_ * kstar;
    if (!(pk > 1.0))
        throw DomainError("no positive steady state: p*k* <= 1");
    switch (kind_)
    {
    case BirthKind::ricker:
        return std::pow(std::log(pk) / a_, 1.0 / q_);
    case BirthKind::beverton_holt:
        return std::pow((pk - 1.0) / a_, 1.0 / q_);
    case BirthKind::logistic:
        return K_ * (1.0 - 1.0 / pk);
    default:
        break;
    }
    return 0.0;
}

std::string BirthFunction::describe() const
{
    std::ostringstream os;
    os.precision(17);
    os << to_string(kind_) << "(p=" << p_;
    switch (kind_)
    {
    case BirthKind::ricker:
    case BirthKind::beverton_holt:
        os << ", a=" << a_ << ", q=" << q_;
        break;
    case BirthKind::logistic:
        os << ", K=" << K_;
        break;
    case BirthKind::table:
        os << ", nodes=" << nodes_.size();
        break;
    case BirthKind::linear:
        break;
    }
    os << ')';
    return os.str();
}

} // namespace agedelay
