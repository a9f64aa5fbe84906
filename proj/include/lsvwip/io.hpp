#pragma once

// CSV / JSON serialization of paths, densities, excursions, partitions, metric
// brackets, stable laws and report tables. Numbers use "%.17g" so every double
// round-trips exactly.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lsvwip/cadlag.hpp"
#include "lsvwip/diagnostics.hpp"
#include "lsvwip/inducing.hpp"
#include "lsvwip/maps.hpp"
#include "lsvwip/stable.hpp"

namespace lsvwip {

/// Paths on [0, T]. Layout:
///   T,initial_value
///   <T>,<initial>
///   breakpoint,value
///   <b_0>,<v_0>
///   ...
void write_step_path_csv(std::ostream& out, const StepPath& path);
/// Throws ValidationError naming the offending line.
StepPath read_step_path_csv(std::istream& in);
void save_step_path_csv(const std::filesystem::path& file, const StepPath& path);
StepPath load_step_path_csv(const std::filesystem::path& file);

/// bin_left,bin_right,mass
void write_density_csv(std::ostream& out, const DensityEstimate& density);
/// y,r,Phi,PhiStar,direction
void write_excursions_csv(std::ostream& out, const std::vector<ExcursionSummary>& excursions);
/// n,left,right,measure_estimate
void write_partition_csv(std::ostream& out, const ReturnPartition& partition);

/// Generic CSV for report tables; cells containing ',' or '"' are quoted.
void write_table_csv(std::ostream& out, const Table& table);
void save_table_csv(const std::filesystem::path& file, const Table& table);

Json to_json(const MetricResult& result);
Json to_json(const StableLaw& law);
StableLaw stable_law_from_json(const Json& j);

/// Writes `text` to `file`, creating parent directories; throws std::runtime_error on failure.
void write_text_file(const std::filesystem::path& file, const std::string& text);

}  // namespace lsvwip
