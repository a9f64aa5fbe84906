#pragma once

// Inducing on Y = [1/2, 1]: return times, excursions, induced observables,
// the monotonicity functional Phi*, lap numbers and the scaled paths
// W_n, U_n, P_n built from them.

#include <cstdint>
#include <cmath>
#include <utility>
#include <vector>

#include "lsvwip/cadlag.hpp"
#include "lsvwip/maps.hpp"

namespace lsvwip {

inline constexpr double kInducingLeft = 0.5;
inline constexpr std::uint64_t kDefaultReturnCap = 100'000'000;

inline bool in_inducing_set(double x) noexcept { return x >= kInducingLeft; }

/// Least k >= 1 with f^k(y) in Y. Throws TruncationError past `cap`.
std::uint64_t return_time(const MapSpec& spec, double y, std::uint64_t cap = kDefaultReturnCap);

enum class Direction { Increasing, Decreasing, Tie };

const char* to_string(Direction d) noexcept;

/// Both maxima of the Phi* display over 0 <= l' <= l <= r, from running envelopes.
struct MonotonicityParts {
    double drop = 0.0;  ///< max (phi_l' - phi_l), equal to max (up_l - phi_l)
    double rise = 0.0;  ///< max (phi_l - phi_l'), equal to max (phi_l - down_l)

    double phi_star() const noexcept { return drop < rise ? drop : rise; }
    Direction direction() const noexcept {
        if (drop < rise) return Direction::Increasing;
        if (rise < drop) return Direction::Decreasing;
        return Direction::Tie;
    }
};

/// Phi* for an explicit partial-sum sequence phi_0 .. phi_r.
MonotonicityParts monotonicity_parts(const std::vector<double>& partial_sums);

struct Excursion {
    double start = 0.0;
    std::uint64_t return_time = 0;
    std::vector<double> partial_sums;  ///< phi_0 = 0 .. phi_r
    double induced_value = 0.0;        ///< Phi(y) = phi_r
    double phi_star = 0.0;
    double env_up = 0.0;    ///< max_{l <= r} phi_l
    double env_down = 0.0;  ///< min_{l <= r} phi_l
    Direction direction = Direction::Tie;
    double next_start = 0.0;  ///< F(y) = f^r(y)
};

/// Full excursion record starting at y in Y.
Excursion excursion(const MapSpec& spec, const ObservableSpec& obs, double y,
                    std::uint64_t cap = kDefaultReturnCap);

/// Streaming variant of `excursion` that does not keep the partial sums.
struct ExcursionSummary {
    double start = 0.0;
    std::uint64_t return_time = 0;
    double induced_value = 0.0;
    double phi_star = 0.0;
    Direction direction = Direction::Tie;
    double next_start = 0.0;
};

ExcursionSummary summarize_excursion(const MapSpec& spec, const ObservableSpec& obs, double y,
                                     std::uint64_t cap = kDefaultReturnCap);

// ---------------------------------------------------------------------------

/// Occupation times N_0..N_kmax of Y along the orbit of x0 and the visit times
/// r_0 = 0 < r_1 < r_2 < ... (for x0 in Y these are the return-time sums).
struct LapTrace {
    std::uint64_t horizon = 0;
    std::vector<std::uint64_t> lap_numbers;  ///< size horizon + 1
    std::vector<std::uint64_t> return_sums;  ///< r_0 .. r_{N_kmax + 1} (last may be absent if truncated)
    bool next_visit_truncated = false;

    /// max { n : r_n <= k }.
    std::uint64_t laps_from_return_sums(std::uint64_t k) const;
};

/// Builds both representations and throws NumericError if they disagree.
LapTrace lap_numbers(const MapSpec& spec, double x0, std::uint64_t k_max,
                     std::uint64_t cap = kDefaultReturnCap);

/// phi_k = Phi_{N_k} + R_k on Y.
struct BirkhoffSplit {
    double head = 0.0;       ///< Phi_{N_k}(y)
    double remainder = 0.0;  ///< R_k(y), the incomplete last excursion
    std::uint64_t laps = 0;  ///< N_k
};

BirkhoffSplit decompose_birkhoff(const MapSpec& spec, const ObservableSpec& obs, double y,
                                 std::uint64_t k);

// ---------------------------------------------------------------------------

/// Normalizer B(n) = n^{1/alpha} = n^gamma.
inline double normalizer(const MapSpec& spec, double n) { return std::pow(n, spec.gamma()); }

/// s -> B(n)^{-1} phi_{floor(sn)}(x0) on [0, T], breakpoints on the 1/n grid.
StepPath scaled_birkhoff_path(const MapSpec& spec, const ObservableSpec& obs, double x0,
                              std::uint64_t n, double T);

struct ScaledPathBundle {
    std::uint64_t n = 0;
    double T = 0.0;
    double B_n = 0.0;
    StepPath W_n;
    StepPath U_n;
    StepPath P_n;
    /// t_{n,j} = r_j / n for the excursions that start in [0, T].
    std::vector<double> excursion_starts;
    /// Summaries of excursions j = 0 .. floor(Tn) + 1 along the induced orbit.
    std::vector<ExcursionSummary> excursions;
};

ScaledPathBundle scaled_paths(const MapSpec& spec, const ObservableSpec& obs, double y,
                              std::uint64_t n, double T);

/// Number of grid steps floor(T n) with a guard against T n landing a hair below an integer.
std::uint64_t grid_steps(double T, std::uint64_t n);

// ---------------------------------------------------------------------------

struct PartitionCell {
    std::uint64_t n = 0;  ///< constant return time on the cell
    double left = 0.0;
    double right = 0.0;
    double measure_estimate = 0.0;
};

struct ReturnPartition {
    std::vector<PartitionCell> cells;
    /// [1/2, residual_right) holds every y with r(y) > n_max.
    double residual_right = 0.5;
};

/// Cells {r = 1} = [3/4, 1] and {r = n} = [(1+x_n)/2, (1+x_{n-1})/2) for 2 <= n <= n_max.
/// measure_estimate integrates `density` over the cell when given, else Lebesgue length.
ReturnPartition return_partition(const MapSpec& spec, std::uint64_t n_max,
                                 const DensityEstimate* density = nullptr);

/// phi0 = phi(0) - mu(Y)^{-1} phi(0) 1_Y and phi_tilde = phi - phi0.
std::pair<ObservableSpec, ObservableSpec> split_observable(const ObservableSpec& obs, double mu_Y);

// ---------------------------------------------------------------------------

/// Start point "from mu_Y": draw from `density`, iterate `burn_in` steps, then
/// continue until the orbit lands in Y.
double sample_inducing_start(const MapSpec& spec, const DensitySpec& density, std::uint64_t burn_in,
                             Rng& rng, std::uint64_t cap = kDefaultReturnCap);

/// Long-run occupation frequency of Y over `chains` orbits of total length `orbit_length`.
double estimate_mu_Y(const MapSpec& spec, std::uint64_t orbit_length, std::uint64_t burn_in,
                     std::uint64_t chains, std::uint64_t seed);

}  // namespace lsvwip
