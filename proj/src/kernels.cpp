#include "lsvwip/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lsvwip {

namespace {

void require_grid(const std::vector<std::uint64_t>& grid, const char* who) {
    if (grid.empty() || grid.front() < 1 || !std::is_sorted(grid.begin(), grid.end()) ||
        std::adjacent_find(grid.begin(), grid.end()) != grid.end())
        throw ValidationError(std::string(who) + ": n_grid must be strictly increasing and >= 1");
}

}  // namespace

std::vector<InducedOrbitStats> induced_ensemble(const MapSpec& spec, const ObservableSpec& obs,
                                                const InducedEnsembleParams& params, Exec exec) {
    require_grid(params.n_grid, "induced_ensemble");
    const auto& grid = params.n_grid;
    const std::uint64_t n_max = grid.back();
    std::vector<double> B(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) B[g] = normalizer(spec, static_cast<double>(grid[g]));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double tilde_offset = params.value_at_zero / params.mu_Y;

    std::vector<InducedOrbitStats> out(params.orbits);
    for_each_task(exec, params.orbits, [&](std::uint64_t i) {
        InducedOrbitStats st;
        st.head.assign(grid.size(), nan);
        st.max_phi_star.assign(grid.size(), nan);
        st.max_abs_tilde.assign(grid.size(), nan);
        Rng rng = Rng::for_task(params.seed, params.stream, i);
        try {
            double y = sample_inducing_start(spec, params.start_density, params.burn_in, rng);
            double head = 0.0;
            double tilde = 0.0;
            double max_abs_tilde = 0.0;
            double max_star = 0.0;
            std::size_t g_head = 0;  // next grid entry for quantities indexed by j < n
            std::size_t g_star = 0;  // next grid entry for quantities indexed by j <= n
            for (std::uint64_t j = 0; j <= n_max; ++j) {
                const ExcursionSummary e = summarize_excursion(spec, obs, y);
                y = e.next_start;
                ++st.excursions;
                max_star = std::max(max_star, e.phi_star);
                if (e.phi_star > params.phi_star_bound) ++st.bound_violations;
                st.implied_eta = std::max(st.implied_eta, e.phi_star / normalizer(spec, static_cast<double>(e.return_time)));
                st.largest_return = std::max(st.largest_return, e.return_time);
                head += e.induced_value;
                tilde += e.induced_value - params.value_at_zero * static_cast<double>(e.return_time) + tilde_offset;
                max_abs_tilde = std::max(max_abs_tilde, std::abs(tilde));
                if (g_star < grid.size() && j == grid[g_star]) {
                    st.max_phi_star[g_star] = max_star / B[g_star];
                    ++g_star;
                }
                if (g_head < grid.size() && j + 1 == grid[g_head]) {
                    st.head[g_head] = head / B[g_head];
                    st.max_abs_tilde[g_head] = max_abs_tilde / B[g_head];
                    ++g_head;
                }
            }
            st.largest_phi_star = max_star;
        } catch (const TruncationError&) {
            st.truncated = true;
        }
        out[i] = std::move(st);
    });
    return out;
}

std::vector<std::vector<double>> full_ensemble(const MapSpec& spec, const ObservableSpec& obs,
                                               const FullEnsembleParams& params, Exec exec) {
    require_grid(params.n_grid, "full_ensemble");
    const auto& grid = params.n_grid;
    std::vector<std::vector<double>> out(params.orbits, std::vector<double>(grid.size()));
    for_each_task(exec, params.orbits, [&](std::uint64_t i) {
        Rng rng = Rng::for_task(params.seed, params.stream, i);
        double x = sample_initial(params.start_density, rng);
        double s = 0.0;
        std::uint64_t k = 0;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            for (; k < grid[g]; ++k) {
                s += obs(x);
                x = spec(x);
            }
            out[i][g] = s / normalizer(spec, static_cast<double>(grid[g]));
        }
    });
    return out;
}

std::vector<PathFunctionals> full_path_functionals(const MapSpec& spec, const ObservableSpec& obs, std::uint64_t n,
                                                   const FullEnsembleParams& params, Exec exec) {
    std::vector<PathFunctionals> out(params.orbits);
    for_each_task(exec, params.orbits, [&](std::uint64_t i) {
        Rng rng = Rng::for_task(params.seed, params.stream, i);
        const double x0 = sample_initial(params.start_density, rng);
        const StepPath w = scaled_birkhoff_path(spec, obs, x0, n, 1.0);
        out[i] = {sup_functional(w), max_jump(w)};
    });
    return out;
}

std::vector<PathFunctionals> levy_path_functionals(const StableLaw& law, const LevyPathConfig& config,
                                                   std::uint64_t paths, std::uint64_t seed, Exec exec) {
    config.validate();
    std::vector<PathFunctionals> out(paths);
    for_each_task(exec, paths, [&](std::uint64_t i) {
        Rng rng = Rng::for_task(seed, Stream::LevyPaths, i);
        const StepPath w = sample_levy_path(law, config, rng);
        out[i] = {sup_functional(w), max_jump(w)};
    });
    return out;
}

std::vector<std::uint64_t> excursion_return_times(const MapSpec& spec, const ExcursionChainParams& params,
                                                  Exec exec) {
    std::vector<std::uint64_t> out(params.chains * params.per_chain);
    for_each_task(exec, params.chains, [&](std::uint64_t c) {
        Rng rng = Rng::for_task(params.seed, params.stream, c);
        double y = sample_inducing_start(spec, params.start_density, params.burn_in, rng);
        for (std::uint64_t j = 0; j < params.per_chain; ++j) {
            std::uint64_t r = 0;
            do {
                y = spec(y);
                ++r;
                if (r == kDefaultReturnCap) throw TruncationError("excursion_return_times: cap exceeded", r);
            } while (y < kInducingLeft);
            out[c * params.per_chain + j] = r;
        }
    });
    return out;
}

}  // namespace lsvwip
