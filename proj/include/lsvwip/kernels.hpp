#pragma once

// Monte Carlo ensemble kernels. Every kernel runs one independent task per
// ensemble member with its own derived generator and writes into a pre-sized
// slot, so `Exec::Serial` (the reference) and `Exec::Parallel` (OpenMP) return
// bit-identical results for any thread count.

#include <cstdint>
#include <vector>

#include "lsvwip/inducing.hpp"
#include "lsvwip/maps.hpp"
#include "lsvwip/parallel.hpp"
#include "lsvwip/rng.hpp"
#include "lsvwip/stable.hpp"

namespace lsvwip {

// ---------------------------------------------------------------------------
// Induced orbits y, F y, F^2 y, ... started "from mu_Y".

struct InducedEnsembleParams {
    std::uint64_t orbits = 0;
    std::vector<std::uint64_t> n_grid;  ///< sorted, >= 1
    std::uint64_t burn_in = 1000;
    DensitySpec start_density = DensitySpec::uniform();
    std::uint64_t seed = 0;
    Stream stream = Stream::InducedEnsemble;
    /// phi(0) of the centered observable and the mu(Y) estimate, used for the
    /// Hoelder part Phi~ = Phi - phi(0) (r - 1 / mu(Y)) of the split observable.
    double value_at_zero = 0.0;
    double mu_Y = 0.5;
    /// Excursions with Phi* above this bound are counted as violations.
    double phi_star_bound = 0.0;
};

struct InducedOrbitStats {
    /// Per grid entry n: B(n)^{-1} Phi_n (the marginal P_n(1)).
    std::vector<double> head;
    /// Per grid entry n: B(n)^{-1} max_{0 <= j <= n} Phi* o F^j.
    std::vector<double> max_phi_star;
    /// Per grid entry n: B(n)^{-1} max_{j <= n} |Phi~_j|.
    std::vector<double> max_abs_tilde;
    std::uint64_t excursions = 0;
    double largest_phi_star = 0.0;
    std::uint64_t bound_violations = 0;
    /// max Phi* / B(r) over the orbit's excursions (the implied eta).
    double implied_eta = 0.0;
    std::uint64_t largest_return = 0;
    bool truncated = false;
};

std::vector<InducedOrbitStats> induced_ensemble(const MapSpec& spec, const ObservableSpec& obs,
                                                const InducedEnsembleParams& params, Exec exec = Exec::Parallel);

// ---------------------------------------------------------------------------
// Full-system Birkhoff sums from an arbitrary initial density.

struct FullEnsembleParams {
    std::uint64_t orbits = 0;
    std::vector<std::uint64_t> n_grid;  ///< sorted, >= 1
    DensitySpec start_density = DensitySpec::uniform();
    std::uint64_t seed = 0;
    Stream stream = Stream::FullEnsemble;
};

/// Result[i][g] = B(n_g)^{-1} phi_{n_g}(x0_i), the marginal W_n(1).
std::vector<std::vector<double>> full_ensemble(const MapSpec& spec, const ObservableSpec& obs,
                                               const FullEnsembleParams& params, Exec exec = Exec::Parallel);

/// Path functionals of W_n on [0, 1] built as StepPaths: sup and max jump.
struct PathFunctionals {
    double sup = 0.0;
    double max_jump = 0.0;
};

/// Result[i] for the path s -> B(n)^{-1} phi_{floor(sn)}(x0_i).
std::vector<PathFunctionals> full_path_functionals(const MapSpec& spec, const ObservableSpec& obs, std::uint64_t n,
                                                   const FullEnsembleParams& params, Exec exec = Exec::Parallel);

/// Result[i] for sampled Levy paths on [0, T] with the given grid step.
std::vector<PathFunctionals> levy_path_functionals(const StableLaw& law, const LevyPathConfig& config,
                                                   std::uint64_t paths, std::uint64_t seed,
                                                   Exec exec = Exec::Parallel);

// ---------------------------------------------------------------------------
// Consecutive excursions along `chains` induced orbits (mu_Y-like after burn-in).

struct ExcursionChainParams {
    std::uint64_t chains = 100;
    std::uint64_t per_chain = 10000;
    std::uint64_t burn_in = 1000;
    DensitySpec start_density = DensitySpec::uniform();
    std::uint64_t seed = 0;
    Stream stream = Stream::Excursions;
};

/// Return times in chain-major order; length chains * per_chain.
std::vector<std::uint64_t> excursion_return_times(const MapSpec& spec, const ExcursionChainParams& params,
                                                  Exec exec = Exec::Parallel);

}  // namespace lsvwip
