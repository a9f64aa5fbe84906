#pragma once

// Strict JSON run configuration. Unknown keys, wrong types and out-of-range values
// are rejected with a diagnostic naming the field path (and the source line when
// it can be located); the CLI maps ConfigError to exit status 2.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "lsvwip/diagnostics.hpp"
#include "lsvwip/maps.hpp"

namespace lsvwip::app {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PathsDemoConfig {
    std::uint64_t n = 1000;
    double T = 1.0;
    std::uint64_t burn_in = 1000;
    /// Start of the induced orbit in [1/2, 1]; drawn from mu_Y (burn-in) when absent.
    std::optional<double> y0;
    double levy_grid_step = 0.001;
};

struct RunConfig {
    double gamma = 0.6;
    ObservableSpec observable = ObservableSpec::affine(1.0, -1.0);
    std::uint64_t seed = 20240601;
    CalibrationParams calibration;

    std::optional<MetricCheckParams> metric_checks;
    std::optional<StableCheckParams> stable_consistency;
    std::optional<TailParams> tail_exponent;
    std::optional<ExcursionBoundParams> excursion_bound;
    std::optional<LapParams> lap_sllns;
    std::optional<MonotonicityParams> monotonicity;
    std::optional<WipParams> wip_marginal;
    std::optional<TopologyParams> topology_probe;

    PathsDemoConfig paths_demo;
    bool plots = true;

    MapSpec map() const { return MapSpec::lsv(gamma); }
    /// True when any enabled suite needs the calibrated observable / laws.
    bool needs_calibration() const;
};

/// Parses and validates `text`; throws ConfigError.
RunConfig parse_config(const std::string& text);
/// Reads `file` (UTF-8) and parses it; throws ConfigError.
RunConfig load_config(const std::filesystem::path& file);

/// Fully resolved configuration (every default spelled out). Re-parsing the
/// result yields the same RunConfig.
Json to_json(const RunConfig& config);

}  // namespace lsvwip::app
