#pragma once

// Report assembly: report.json, per-suite CSV tables and optional SVG curves.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lsvwip/app/config.hpp"
#include "lsvwip/app/svg.hpp"
#include "lsvwip/diagnostics.hpp"

namespace lsvwip::app {

/// Master-seed derivation labels; fixed so that a suite's seed never depends on
/// which other suites are enabled.
enum class SeedLabel : std::uint64_t {
    Calibration = 100,
    MetricChecks = 1,
    StableConsistency = 2,
    TailExponent = 3,
    ExcursionBound = 4,
    LapSllns = 5,
    Monotonicity = 6,
    WipMarginal = 7,
    TopologyProbe = 8,
    PathsDemo = 9,
};

std::uint64_t suite_seed(std::uint64_t master, SeedLabel label);

/// metrics.csv: name,value,comparison,threshold,pass,description
Table metrics_table(const SuiteReport& report);

/// Curves worth plotting for a suite (empty when the suite has none).
std::vector<std::pair<std::string, Plot>> suite_plots(const SuiteReport& report);

/// Writes <dir>/<suite>/metrics.csv, one CSV per table and, when `plots`, SVGs.
void write_suite_artifacts(const std::filesystem::path& dir, const SuiteReport& report, bool plots);

/// report.json document. Contains no timings or host data, so it is a pure
/// function of the configuration and the seed.
Json build_report(const RunConfig& config, const std::optional<Calibration>& calibration,
                  const std::vector<SuiteReport>& suites);

/// Serialized form written to disk (2-space indent, trailing newline).
std::string dump_json(const Json& j);

}  // namespace lsvwip::app
