#pragma once

#include "agedelay/age_rates.hpp"
#include "agedelay/birth.hpp"
#include "agedelay/kernel.hpp"
#include "agedelay/simulator.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace agedelay
{

struct ModelSection
{
    ModelParams params;
    RateProfile diffusion = RateProfile::constant(0.5);
    RateProfile death = RateProfile::constant(0.0);
    BirthFunction birth = BirthFunction::logistic(2.5, 1.0);

    friend bool operator==(const ModelSection&, const ModelSection&) = default;
};

struct OutputSection
{
    /// Directory for artifacts; empty means stdout for single-document outputs
    /// and the working directory otherwise.
    std::string dir;
    /// Every trace_stride-th time stamp goes to trace.csv.
    std::size_t trace_stride = 1;
    std::size_t kernel_ages = 5;
    std::size_t kernel_points = 9;

    friend bool operator==(const OutputSection&, const OutputSection&) = default;
};

struct TolerancesSection
{
    double tol_conv = 1e-3;
    std::size_t n_windows = 5;
    double delta_report = 1e-6;
    /// Upper clamp for the state; unset means 10 max(M, max phi) when a ceiling exists.
    std::optional<double> state_cap;

    friend bool operator==(const TolerancesSection&, const TolerancesSection&) = default;
};

struct RunConfig
{
    ModelSection model;
    SimGrid grid;
    InitialHistory initial;
    KernelOptions kernel;
    OutputSection output;
    TolerancesSection tolerances;
    double horizon = 200.0;

    /// Builds the validated rate object (k* included).
    AgeRates rates() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses a JSON document. Unknown keys, type mismatches, missing required keys
/// and invariant violations raise ConfigError naming the dotted key path.
RunConfig parse_config(std::string_view text);

/// Canonical JSON with every default spelled out; parse_config inverts it.
std::string serialize_config(const RunConfig& config);

} // namespace agedelay
