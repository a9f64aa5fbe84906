#pragma once

// Statistical verification suites tying simulation output to the limit theorems:
// goodness of fit, tail exponents, monotonicity conditions, the excursion
// inequality, lap-number SLLN, WIP marginals and the J1/M1 topology probe.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lsvwip/cadlag.hpp"
#include "lsvwip/inducing.hpp"
#include "lsvwip/maps.hpp"
#include "lsvwip/rng.hpp"
#include "lsvwip/stable.hpp"

namespace lsvwip {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Reports

enum class Comparison { Less, LessEqual, Greater, GreaterEqual };

const char* to_string(Comparison c) noexcept;
bool compare(double value, Comparison c, double threshold) noexcept;

/// One acceptance metric: pass = (value <comparison> threshold), evaluated on the
/// reported numbers.
struct MetricCheck {
    std::string name;
    double value = 0.0;
    Comparison comparison = Comparison::Less;
    double threshold = 0.0;
    bool pass = false;
    std::string description;
};

/// Rectangular table written as CSV; cells are preformatted strings.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
};

/// Shortest round-trip decimal representation of a double ("%.17g").
std::string format_number(double x);
std::string format_number(std::uint64_t x);

struct SuiteReport {
    std::string suite_name;
    std::vector<MetricCheck> metrics;
    Json metadata = Json::object();
    std::vector<Table> tables;

    const MetricCheck& check(std::string name, double value, Comparison comparison, double threshold,
                             std::string description);
    const MetricCheck* find(const std::string& name) const;
    bool passed() const;
    Json to_json() const;
};

// ---------------------------------------------------------------------------
// Statistics primitives

class EmpiricalMeasure {
public:
    explicit EmpiricalMeasure(std::vector<double> samples);

    const std::vector<double>& samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    /// #{x_i <= x} / N (right-continuous).
    double ecdf(double x) const;
    /// #{x_i < x} / N.
    double ecdf_left(double x) const;

private:
    std::vector<double> samples_;
};

/// sup_x |ECDF(x) - F(x)| evaluated at every sample point from both sides.
double ks_distance(const EmpiricalMeasure& samples, const std::function<double(double)>& cdf);
double two_sample_ks(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

/// Quantile by linear interpolation between order statistics (NaNs dropped).
double quantile(std::vector<double> values, double p);
inline double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

struct TailFit {
    double alpha_hat = 0.0;
    double alpha_lower_half = 0.0;
    double alpha_upper_half = 0.0;
    bool non_power_law = false;
    std::uint64_t n_min = 0;
    std::uint64_t n_max = 0;
    std::uint64_t exceedances = 0;
    std::vector<std::uint64_t> grid;
    std::vector<double> tail;  ///< empirical P(r > n) on the grid
};

inline constexpr std::uint64_t kMinTailExceedances = 500;

/// Least-squares slope of log P(r > n) against log n on a logarithmic grid of n >= n_min;
/// alpha_hat = -slope. Flags a non-power-law tail when the fits on the two halves of the
/// grid differ by more than `flag_tolerance` relative to alpha_hat.
TailFit tail_exponent(const std::vector<std::uint64_t>& samples, std::uint64_t n_min,
                      double flag_tolerance = 0.25, std::size_t grid_points = 24);

/// Integer Pareto draws ceil(U^{-1/alpha}) with P(X > n) = n^{-alpha} at integers.
std::vector<std::uint64_t> pareto_samples(double alpha, std::uint64_t count, std::uint64_t seed);
/// Geometric draws on {1, 2, ...} with P(X > n) = (1 - p)^n.
std::vector<std::uint64_t> geometric_samples(double p, std::uint64_t count, std::uint64_t seed);

/// Random step path on [0, T] with up to `max_jumps` jumps; about half of the jump
/// times sit on a coarse grid so that coincidences between paths occur.
StepPath random_step_path(Rng& rng, double T, std::uint64_t max_jumps);

// ---------------------------------------------------------------------------
// Calibration shared by the suites

struct CalibrationParams {
    std::uint64_t centering_orbit_length = 1'000'000'000;
    std::uint64_t centering_chains = 200;
    std::uint64_t burn_in = 10'000;
    std::uint64_t density_orbit_length = 50'000'000;
    std::uint64_t density_bins = 200;
    std::uint64_t mu_Y_orbit_length = 100'000'000;
    std::uint64_t mu_Y_chains = 100;
};

struct Calibration {
    MapSpec spec;
    ObservableSpec observable;  ///< centered
    DensityEstimate density;
    double mu_Y = 0.0;
    double mean_return = 0.0;  ///< Kac: 1 / mu(Y)
    double sup_norm = 0.0;
    double sign_radius = 0.0;  ///< epsilon: phi keeps the sign of phi(0) on [0, epsilon)
    std::uint64_t k_threshold = 0;  ///< least k with x_k < epsilon
    double phi_star_bound = 0.0;    ///< (k + 1) |phi|_inf
    std::optional<StableLaw> full_law;     ///< from_lsv_params with the centered phi(0)
    std::optional<StableLaw> induced_law;  ///< c scaled up by the mean return time

    Json to_json() const;
};

Calibration calibrate(const MapSpec& spec, const ObservableSpec& raw_observable, const CalibrationParams& params,
                      std::uint64_t seed);

/// Least k with x_k < epsilon along the preimage sequence (the threshold of the Phi* bound).
std::uint64_t preimage_threshold(const MapSpec& spec, double epsilon);

// ---------------------------------------------------------------------------
// Suites

struct MonotonicityParams {
    std::vector<std::uint64_t> n_grid{100, 1000, 10000};
    std::uint64_t orbits = 1000;
    std::uint64_t burn_in = 1000;
    std::uint64_t max_violations = 0;
    std::uint64_t min_excursions = 100'000;
};

SuiteReport monotonicity_suite(const Calibration& cal, const MonotonicityParams& params, std::uint64_t seed);

struct ExcursionBoundParams {
    std::uint64_t n = 1000;
    double T = 1.0;
    std::uint64_t trials = 100;
    double tolerance = 1e-6;
    double slack = 1e-6;
    std::uint64_t max_violations = 0;
    std::vector<std::uint64_t> rhs_n_grid{100, 1000, 10000};
    std::uint64_t rhs_trials = 100;
    std::uint64_t burn_in = 1000;
};

/// Both sides of the excursion inequality for one induced orbit.
struct ExcursionBoundTrial {
    MetricResult m1;
    double rhs = 0.0;            ///< max_j (r/n + 2 Phi*/B) o F^j, j <= floor(Tn) + 1
    double straddle = 0.0;       ///< sup distance of W_n and U_n on the incomplete last excursion
    double rhs_corrected = 0.0;  ///< max(rhs, straddle)
};

ExcursionBoundTrial excursion_bound_trial(const MapSpec& spec, const ObservableSpec& obs, double y, std::uint64_t n,
                                          double T, double tolerance);
/// Right-hand side only (no metric evaluation).
double excursion_bound_rhs(const ScaledPathBundle& bundle);

SuiteReport excursion_bound_check(const Calibration& cal, const ExcursionBoundParams& params, std::uint64_t seed);

struct LapParams {
    double T = 1.0;
    std::vector<std::uint64_t> k_grid{1000, 10000, 100000};
    std::uint64_t trials = 100;
    std::uint64_t burn_in = 1000;
    std::uint64_t kac_chains = 100;
    std::uint64_t kac_excursions = 1'000'000;
    double kac_tolerance = 0.02;
};

/// sup_{t <= T} |k^{-1} N_{floor(tk)} - t mu_Y|, exact over the step structure.
double lap_sup_error(const LapTrace& trace, std::uint64_t k, double T, double mu_Y);

SuiteReport lap_sllns(const Calibration& cal, const LapParams& params, std::uint64_t seed);

struct TailParams {
    std::uint64_t excursions = 1'000'000;
    std::uint64_t chains = 100;
    std::uint64_t burn_in = 1000;
    std::uint64_t n_min = 10;
    double rel_tolerance = 0.10;
    double pareto_alpha = 1.5;
    std::uint64_t pareto_samples = 1'000'000;
    double pareto_rel_tolerance = 0.05;
    double geometric_p = 0.3;
    std::uint64_t geometric_samples = 1'000'000;
};

SuiteReport tail_exponent_suite(const Calibration& cal, const TailParams& params, std::uint64_t seed);

struct WipParams {
    std::vector<std::uint64_t> n_grid{100, 1000, 10000};
    std::uint64_t samples = 4000;
    std::uint64_t burn_in = 1000;
    DensitySpec alt_density = DensitySpec::polynomial({0.0, 2.0});
    double induced_final_ks = 0.08;
    double strong_ks = 0.05;
};

SuiteReport wip_marginal_suite(const Calibration& cal, const WipParams& params, std::uint64_t seed);

struct TopologyParams {
    std::vector<std::uint64_t> n_grid{100, 1000, 10000};
    std::uint64_t samples = 4000;
    std::uint64_t levy_paths = 4000;
    double levy_median_rel_tolerance = 0.2;
};

SuiteReport topology_probe(const Calibration& cal, const TopologyParams& params, std::uint64_t seed);

struct StableCheckParams {
    std::uint64_t samples = 100'000;
    double ks_tolerance = 0.01;
    std::uint64_t cf_grid_points = 41;
    double cf_tolerance = 0.02;
    std::uint64_t sum_samples = 10'000;
    std::uint64_t sum_terms = 100;
    double sum_ks_tolerance = 0.03;
    std::uint64_t levy_paths = 10'000;
    double levy_grid_step = 0.01;
    double levy_ks_tolerance = 0.03;
};

SuiteReport stable_consistency(const Calibration& cal, const StableCheckParams& params, std::uint64_t seed);

struct MetricCheckParams {
    std::uint64_t trials = 500;
    double tolerance = 1e-6;
    double delta = 0.01;
    double j1_lower_min = 0.45;
    double m1_upper_max = 0.02;
    double order_slack = 2e-6;
    std::uint64_t max_jumps = 6;
};

SuiteReport metric_checks(const MetricCheckParams& params, std::uint64_t seed);

}  // namespace lsvwip
