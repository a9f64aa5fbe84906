#pragma once

// Subcommand implementations behind the lsvwip executable. Each returns the
// process exit status: 0 success, 1 suite failure or runtime error, 2 invalid
// input (config schema, parse or domain errors).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace lsvwip::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;

struct CommonOptions {
    std::filesystem::path config;
    std::filesystem::path out = "lsvwip_out";
    std::optional<std::uint64_t> seed;  ///< overrides the config seed
    bool no_plot = false;
};

/// Runs the configured suites; writes report.json, per-suite CSVs and SVGs.
int run_command(const CommonOptions& options, std::ostream& out, std::ostream& err);

/// One induced orbit: W_n, U_n, P_n, a Levy path, excursion data and an overlay SVG.
int paths_demo_command(const CommonOptions& options, std::ostream& out, std::ostream& err);

/// Certified J1/M1 bracket between two StepPath CSVs, printed as JSON.
int metric_command(const std::filesystem::path& first, const std::filesystem::path& second,
                   const std::string& metric_tag, double tolerance, std::ostream& out, std::ostream& err);

}  // namespace lsvwip::app
