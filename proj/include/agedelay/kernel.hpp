#pragma once

#include "agedelay/age_rates.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace agedelay
{

struct KernelOptions
{
    /// Certified bound on the dropped tail of either series.
    double spectral_tol = 1e-14;
    /// eval() uses the image sum below this diffusion time, the cosine series above.
    double alpha_switch = 0.1;
    /// Cap on cosine modes (and on image pairs).
    std::size_t max_terms = 10000;
    /// tabulate() refuses tables larger than this.
    std::size_t memory_cap_bytes = std::size_t{1} << 30;

    friend bool operator==(const KernelOptions&, const KernelOptions&) = default;
};

// Neumann heat kernel on [0, pi] at diffusion time alpha, without the
// survival factor:
//   G(alpha, x, y) = (1/pi) (1 + 2 sum_{n>=1} exp(-n^2 alpha) cos(nx) cos(ny))
//                  = sum_m [g(x - y + 2 pi m) + g(x + y + 2 pi m)],
//   g(z) = exp(-z^2 / (4 alpha)) / sqrt(4 pi alpha).

/// Number of cosine modes N such that 2 exp(-N^2 alpha) / (1 - exp(-alpha)) < tol.
std::size_t spectral_terms(double alpha, double tol);

/// Smallest M >= 1 such that the images with |m| > M contribute less than tol.
std::size_t image_terms(double alpha, double tol);

double neumann_heat_spectral(double alpha, double x, double y, double tol = 1e-14,
                             std::size_t max_terms = 10000);
double neumann_heat_images(double alpha, double x, double y, double tol = 1e-14,
                           std::size_t max_terms = 10000);

/// Dense K[age][x][y] table.
class KernelTable
{
public:
    KernelTable(std::vector<double> ages, std::vector<double> xs, std::vector<double> ys);

    double operator()(std::size_t ia, std::size_t ix, std::size_t iy) const
    {
        return values_[(ia * xs_.size() + ix) * ys_.size() + iy];
    }
    double& at(std::size_t ia, std::size_t ix, std::size_t iy)
    {
        return values_[(ia * xs_.size() + ix) * ys_.size() + iy];
    }

    /// Row K[ia][ix][.] over y.
    std::span<const double> row(std::size_t ia, std::size_t ix) const
    {
        return {values_.data() + (ia * xs_.size() + ix) * ys_.size(), ys_.size()};
    }

    const std::vector<double>& ages() const { return ages_; }
    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& ys() const { return ys_; }

private:
    std::vector<double> ages_;
    std::vector<double> xs_;
    std::vector<double> ys_;
    std::vector<double> values_;
};

/// K(a, x, y) = beta(a) G(alpha(a), x, y) on [r, A_l] x [0, pi]^2.
class KernelEvaluator
{
public:
    explicit KernelEvaluator(AgeRates rates, KernelOptions options = {});

    const AgeRates& rates() const { return rates_; }
    const KernelOptions& options() const { return options_; }

    /// Cosine series. Throws AccuracyError if more than max_terms modes are needed.
    double eval_spectral(double a, double x, double y) const;
    /// Gaussian image sum.
    double eval_images(double a, double x, double y) const;
    /// Image sum when alpha(a) < alpha_switch, cosine series otherwise.
    double eval(double a, double x, double y) const;

    /// Throws ResourceError if the table would exceed memory_cap_bytes.
    KernelTable tabulate(std::span<const double> ages, std::span<const double> xs,
                         std::span<const double> ys) const;

private:
    /// Validates the point and returns the age clamped to [r, A_l].
    double check_point(double a, double x, double y) const;

    AgeRates rates_;
    KernelOptions options_;
};

} // namespace agedelay
