#include "agedelay/kernel.hpp"

#include "agedelay/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace agedelay
{

namespace
{

constexpr double pi = std::numbers::pi;

void check_alpha(double alpha)
{
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw DomainError("heat kernel: diffusion time alpha must be positive and finite");
}

double gaussian(double z, double alpha)
{
    return std::exp(-z * z / (4.0 * alpha)) / std::sqrt(4.0 * pi * alpha);
}

double image_tail_bound(double alpha, std::size_t m)
{
    const double md = static_cast<double>(m);
    const double ratio = std::exp(-pi * pi * (2.0 * md + 1.0) / alpha);
    return 4.0 * gaussian(2.0 * pi * md, alpha) / (1.0 - ratio);
}

} // namespace

std::size_t spectral_terms(double alpha, double tol)
{
    check_alpha(alpha);
    // 2 sum_{n>N} e^{-n^2 alpha} <= 2 e^{-N^2 alpha} / (1 - e^{-alpha})
    const double one_minus = -std::expm1(-alpha);
    const double needed = std::log(2.0 / (tol * one_minus)) / alpha;
    if (needed <= 0.0)
        return 0;
    auto n = static_cast<std::size_t>(std::ceil(std::sqrt(needed)));
    while (n > 0)
    {
        const double m = static_cast<double>(n - 1);
        if (2.0 * std::exp(-m * m * alpha) / one_minus < tol)
            --n;
        else
            break;
    }
    return n;
}

std::size_t image_terms(double alpha, double tol)
{
    check_alpha(alpha);
    std::size_t m = 1;
    while (!(image_tail_bound(alpha, m) < tol))
    {
        ++m;
        if (m > 1000000)
            throw AccuracyError("heat kernel: image sum does not reach the requested tolerance");
    }
    return m;
}

double neumann_heat_spectral(double alpha, double x, double y, double tol, std::size_t max_terms)
{
    const std::size_t n_terms = spectral_terms(alpha, tol);
    if (n_terms > max_terms)
        throw AccuracyError("heat kernel: cosine series needs " + std::to_string(n_terms)
                            + " modes at alpha=" + std::to_string(alpha)
                            + " (max_terms exceeded); use the image representation");
    // Sum from the smallest terms up.
    double series = 0.0;
    for (std::size_t n = n_terms; n >= 1; --n)
    {
        const double nd = static_cast<double>(n);
        series += std::exp(-nd * nd * alpha) * std::cos(nd * x) * std::cos(nd * y);
    }
    return (1.0 + 2.0 * series) / pi;
}

double neumann_heat_images(double alpha, double x, double y, double tol, std::size_t max_terms)
{
    const std::size_t m_terms = image_terms(alpha, tol);
    if (m_terms > max_terms)
        throw AccuracyError("heat kernel: image sum needs " + std::to_string(m_terms)
                            + " image pairs (max_terms exceeded); use the cosine series");
    double sum = 0.0;
    for (std::size_t k = m_terms; k >= 1; --k)
    {
        const double shift = 2.0 * pi * static_cast<double>(k);
        sum += gaussian(x - y + shift, alpha) + gaussian(x - y - shift, alpha);
        sum += gaussian(x + y + shift, alpha) + gaussian(x + y - shift, alpha);
    }
    sum += gaussian(x - y, alpha) + gaussian(x + y, alpha);
    return sum;
}

KernelTable::KernelTable(std::vector<double> ages, std::vector<double> xs, std::vector<double> ys)
    : ages_(std::move(ages)), xs_(std::move(xs)), ys_(std::move(ys)),
      values_(ages_.size() * xs_.size() * ys_.size(), 0.0)
{
}

KernelEvaluator::KernelEvaluator(AgeRates rates, KernelOptions options)
    : rates_(std::move(rates)), options_(options)
{
    if (!(options_.spectral_tol > 0.0) || !(options_.alpha_switch > 0.0) || options_.max_terms == 0)
        throw DomainError("kernel options: tolerances and term cap must be positive");
}

double KernelEvaluator::check_point(double a, double x, double y) const
{
    constexpr double slack = 1e-12;
    if (!(a >= rates_.r() - slack && a <= rates_.life_span() + slack))
        throw DomainError("kernel: age outside [r, life_span]");
    if (!(x >= -slack && x <= pi + slack && y >= -slack && y <= pi + slack))
        throw DomainError("kernel: position outside [0, pi]");
    return std::clamp(a, rates_.r(), rates_.life_span());
}

double KernelEvaluator::eval_spectral(double a, double x, double y) const
{
    a = check_point(a, x, y);
    return rates_.beta(a)
           * neumann_heat_spectral(rates_.alpha(a), x, y, options_.spectral_tol, options_.max_terms);
}

double KernelEvaluator::eval_images(double a, double x, double y) const
{
    a = check_point(a, x, y);
    return rates_.beta(a)
           * neumann_heat_images(rates_.alpha(a), x, y, options_.spectral_tol, options_.max_terms);
}

double KernelEvaluator::eval(double a, double x, double y) const
{
    a = check_point(a, x, y);
    const double alpha = rates_.alpha(a);
    const double heat = alpha < options_.alpha_switch
                            ? neumann_heat_images(alpha, x, y, options_.spectral_tol, options_.max_terms)
                            : neumann_heat_spectral(alpha, x, y, options_.spectral_tol, options_.max_terms);
    return rates_.beta(a) * heat;
}

KernelTable KernelEvaluator::tabulate(std::span<const double> ages, std::span<const double> xs,
                                      std::span<const double> ys) const
{
    const double bytes = static_cast<double>(ages.size()) * static_cast<double>(xs.size())
                         * static_cast<double>(ys.size()) * sizeof(double);
    if (bytes > static_cast<double>(options_.memory_cap_bytes))
        throw ResourceError("kernel table of " + std::to_string(bytes / (1024.0 * 1024.0))
                            + " MiB exceeds the memory cap");

    KernelTable table({ages.begin(), ages.end()}, {xs.begin(), xs.end()}, {ys.begin(), ys.end()});
    for (std::size_t ia = 0; ia < ages.size(); ++ia)
        for (std::size_t ix = 0; ix < xs.size(); ++ix)
            for (std::size_t iy = 0; iy < ys.size(); ++iy)
                table.at(ia, ix, iy) = eval(ages[ia], xs[ix], ys[iy]);
    return table;
}

} // namespace agedelay
