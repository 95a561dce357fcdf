#pragma once

#include "agedelay/birth.hpp"

#include <string>
#include <vector>

namespace agedelay
{

struct SteadyStateReport
{
    /// Positive roots of k* f(w) - w in (0, M_used], ascending.
    std::vector<double> roots;
    std::vector<double> residuals;
    bool unique = false;
    double M_used = 0.0;
    std::string note;
};

/// Sign-change scan of F(w) = k* f(w) - w on (0, M]: 256 log-spaced points
/// below M/4096 followed by 4096 uniform points up to M, each bracket refined
/// by bisection to rounding level. Points where |F| is at rounding level
/// count as roots (this catches M == w*).
///
/// Returns an empty report with a note when p k* <= 1. Throws
/// InconsistencyError when p k* > 1 but no root is found.
SteadyStateReport find_steady_states(const BirthFunction& f, double kstar, double M);

/// Closed form for the presets; throws DomainError when p k* <= 1.
double closed_form_wstar(const BirthFunction& f, double kstar);

} // namespace agedelay
