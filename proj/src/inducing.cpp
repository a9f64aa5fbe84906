#include "lsvwip/inducing.hpp"

#include "lsvwip/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace lsvwip {

namespace {

void require_in_Y(double y, const char* who) {
    if (!(y >= kInducingLeft && y <= 1.0)) throw DomainError(std::string(who) + ": start point outside Y = [1/2, 1]");
}

// Running envelopes of the partial sums phi_0 = 0, phi_1, ... and both maxima of the
// Phi* display, updated one partial sum at a time.
struct EnvelopeTracker {
    double up = 0.0;
    double down = 0.0;
    double drop = 0.0;
    double rise = 0.0;

    void push(double s) noexcept {
        up = std::max(up, s);
        down = std::min(down, s);
        drop = std::max(drop, up - s);
        rise = std::max(rise, s - down);
    }
    MonotonicityParts parts() const noexcept { return {drop, rise}; }
};

}  // namespace

std::uint64_t return_time(const MapSpec& spec, double y, std::uint64_t cap) {
    require_in_Y(y, "return_time");
    double x = y;
    for (std::uint64_t k = 1; k <= cap; ++k) {
        x = spec(x);
        if (x >= kInducingLeft) return k;
    }
    throw TruncationError("return_time: cap exceeded", cap);
}

const char* to_string(Direction d) noexcept {
    switch (d) {
        case Direction::Increasing: return "increasing";
        case Direction::Decreasing: return "decreasing";
        case Direction::Tie: return "tie";
    }
    return "tie";
}

MonotonicityParts monotonicity_parts(const std::vector<double>& partial_sums) {
    if (partial_sums.empty()) throw ValidationError("monotonicity_parts: empty sequence");
    // Envelopes are taken relative to the first entry, which is phi_0.
    EnvelopeTracker env;
    env.up = env.down = partial_sums.front();
    for (double s : partial_sums) env.push(s);
    return env.parts();
}

Excursion excursion(const MapSpec& spec, const ObservableSpec& obs, double y, std::uint64_t cap) {
    require_in_Y(y, "excursion");
    Excursion e;
    e.start = y;
    e.partial_sums.push_back(0.0);
    EnvelopeTracker env;
    double x = y;
    double s = 0.0;
    std::uint64_t r = 0;
    do {
        if (r == cap) throw TruncationError("excursion: return-time cap exceeded", r);
        s += obs(x);
        x = spec(x);
        ++r;
        e.partial_sums.push_back(s);
        env.push(s);
    } while (x < kInducingLeft);

    e.return_time = r;
    e.induced_value = s;
    e.env_up = env.up;
    e.env_down = env.down;
    const auto parts = env.parts();
    e.phi_star = parts.phi_star();
    e.direction = parts.direction();
    e.next_start = x;
    return e;
}

ExcursionSummary summarize_excursion(const MapSpec& spec, const ObservableSpec& obs, double y,
                                     std::uint64_t cap) {
    require_in_Y(y, "summarize_excursion");
    EnvelopeTracker env;
    double x = y;
    double s = 0.0;
    std::uint64_t r = 0;
    do {
        if (r == cap) throw TruncationError("summarize_excursion: return-time cap exceeded", r);
        s += obs(x);
        x = spec(x);
        ++r;
        env.push(s);
    } while (x < kInducingLeft);
    const auto parts = env.parts();
    return {y, r, s, parts.phi_star(), parts.direction(), x};
}

// ---------------------------------------------------------------------------

std::uint64_t LapTrace::laps_from_return_sums(std::uint64_t k) const {
    const auto it = std::upper_bound(return_sums.begin(), return_sums.end(), k);
    return static_cast<std::uint64_t>(it - return_sums.begin()) - 1;
}

LapTrace lap_numbers(const MapSpec& spec, double x0, std::uint64_t k_max, std::uint64_t cap) {
    if (k_max < 1) throw ValidationError("lap_numbers: k_max must be >= 1");
    if (!(x0 >= 0.0 && x0 <= 1.0)) throw DomainError("lap_numbers: x0 outside [0,1]");
    LapTrace trace;
    trace.horizon = k_max;
    trace.lap_numbers.resize(k_max + 1);
    trace.lap_numbers[0] = 0;
    trace.return_sums.push_back(0);
    double x = x0;
    std::uint64_t laps = 0;
    for (std::uint64_t k = 1; k <= k_max; ++k) {
        x = spec(x);
        if (x >= kInducingLeft) {
            ++laps;
            trace.return_sums.push_back(k);
        }
        trace.lap_numbers[k] = laps;
    }
    // r_{N_kmax + 1}: the first visit after the horizon.
    trace.next_visit_truncated = true;
    for (std::uint64_t k = k_max + 1; k <= k_max + cap; ++k) {
        x = spec(x);
        if (x >= kInducingLeft) {
            trace.return_sums.push_back(k);
            trace.next_visit_truncated = false;
            break;
        }
    }
    for (std::uint64_t k = 0; k <= k_max; ++k)
        if (trace.laps_from_return_sums(k) != trace.lap_numbers[k])
            throw NumericError("lap_numbers: indicator-sum and max-formula representations disagree");
    return trace;
}

BirkhoffSplit decompose_birkhoff(const MapSpec& spec, const ObservableSpec& obs, double y, std::uint64_t k) {
    require_in_Y(y, "decompose_birkhoff");
    BirkhoffSplit out;
    double x = y;
    for (std::uint64_t l = 1; l <= k; ++l) {
        out.remainder += obs(x);
        x = spec(x);
        if (x >= kInducingLeft) {
            // A complete excursion ends at time l.
            out.head += out.remainder;
            out.remainder = 0.0;
            ++out.laps;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

std::uint64_t grid_steps(double T, std::uint64_t n) {
    if (!(T > 0.0) || n == 0) throw ValidationError("grid_steps: need T > 0 and n >= 1");
    const double tn = T * static_cast<double>(n);
    return static_cast<std::uint64_t>(std::floor(tn + 1e-9 * std::max(1.0, tn)));
}

namespace {

double grid_time(std::uint64_t k, std::uint64_t n, double T) {
    return std::min(T, static_cast<double>(k) / static_cast<double>(n));
}

}  // namespace

StepPath scaled_birkhoff_path(const MapSpec& spec, const ObservableSpec& obs, double x0, std::uint64_t n,
                              double T) {
    const std::uint64_t K = grid_steps(T, n);
    const double B = normalizer(spec, static_cast<double>(n));
    std::vector<double> b(K);
    std::vector<double> v(K);
    double x = x0;
    double s = 0.0;
    if (!(x0 >= 0.0 && x0 <= 1.0)) throw DomainError("scaled_birkhoff_path: x0 outside [0,1]");
    for (std::uint64_t k = 1; k <= K; ++k) {
        s += obs(x);
        x = spec(x);
        b[k - 1] = grid_time(k, n, T);
        v[k - 1] = s / B;
    }
    return StepPath(T, 0.0, std::move(b), std::move(v));
}

ScaledPathBundle scaled_paths(const MapSpec& spec, const ObservableSpec& obs, double y, std::uint64_t n,
                              double T) {
    require_in_Y(y, "scaled_paths");
    const std::uint64_t K = grid_steps(T, n);
    ScaledPathBundle out;
    out.n = n;
    out.T = T;
    out.B_n = normalizer(spec, static_cast<double>(n));
    const double B = out.B_n;

    std::vector<double> w_b(K);
    std::vector<double> w_v(K);
    std::vector<double> u_b;
    std::vector<double> u_v;
    out.excursion_starts.push_back(0.0);
    out.excursions.reserve(K + 2);

    double x = y;
    double total = 0.0;
    std::uint64_t ell = 0;
    for (std::uint64_t j = 0; j < K + 2; ++j) {
        const double start = x;
        EnvelopeTracker env;
        double s = 0.0;
        std::uint64_t r = 0;
        do {
            if (r == kDefaultReturnCap) throw TruncationError("scaled_paths: return-time cap exceeded", r);
            const double phi = obs(x);
            s += phi;
            total += phi;
            x = spec(x);
            ++r;
            ++ell;
            env.push(s);
            if (ell <= K) {
                w_b[ell - 1] = grid_time(ell, n, T);
                w_v[ell - 1] = total / B;
            }
        } while (x < kInducingLeft);
        const auto parts = env.parts();
        out.excursions.push_back({start, r, s, parts.phi_star(), parts.direction(), x});
        if (ell <= K) {
            u_b.push_back(grid_time(ell, n, T));
            u_v.push_back(total / B);
            out.excursion_starts.push_back(grid_time(ell, n, T));
        }
    }
    // Excursions may end before W_n is complete only if K + 2 excursions are shorter
    // than K steps in total, which is impossible since every return time is >= 1.

    std::vector<double> p_b(K);
    std::vector<double> p_v(K);
    double head = 0.0;
    for (std::uint64_t k = 1; k <= K; ++k) {
        head += out.excursions[k - 1].induced_value;
        p_b[k - 1] = grid_time(k, n, T);
        p_v[k - 1] = head / B;
    }

    out.W_n = StepPath(T, 0.0, std::move(w_b), std::move(w_v));
    out.U_n = StepPath(T, 0.0, std::move(u_b), std::move(u_v));
    out.P_n = StepPath(T, 0.0, std::move(p_b), std::move(p_v));
    return out;
}

// ---------------------------------------------------------------------------

ReturnPartition return_partition(const MapSpec& spec, std::uint64_t n_max, const DensityEstimate* density) {
    if (n_max < 1) throw ValidationError("return_partition: n_max must be >= 1");
    const auto xs = preimage_sequence(spec, static_cast<std::size_t>(n_max));
    const auto measure = [density](double lo, double hi) {
        return density ? density->mass_between(lo, hi) : hi - lo;
    };

    ReturnPartition part;
    part.cells.push_back({1, 0.75, 1.0, measure(0.75, 1.0)});
    for (std::uint64_t n = 2; n <= n_max; ++n) {
        const double left = 0.5 * (1.0 + xs[n - 1]);
        const double right = 0.5 * (1.0 + xs[n - 2]);
        part.cells.push_back({n, left, right, measure(left, right)});
    }
    part.residual_right = 0.5 * (1.0 + xs[n_max - 1]);

    for (const auto& cell : part.cells) {
        for (double q : {0.25, 0.5, 0.75}) {
            const double y = cell.left + q * (cell.right - cell.left);
            const std::uint64_t r = return_time(spec, y);
            if (r != cell.n)
                throw PartitionError("return_partition: cell r=" + std::to_string(cell.n) +
                                     " has return time " + std::to_string(r) + " at an interior point");
        }
    }
    return part;
}

std::pair<ObservableSpec, ObservableSpec> split_observable(const ObservableSpec& obs, double mu_Y) {
    if (!(mu_Y > 0.0 && mu_Y < 1.0)) throw ValidationError("split_observable: mu(Y) estimate must lie in (0,1)");
    const double v0 = obs.value_at_zero();
    if (v0 == 0.0) return {ObservableSpec::constant(0.0), obs};
    const double inf = std::numeric_limits<double>::infinity();
    const ObservableSpec phi0 = ObservableSpec::constant(v0).with_indicator({kInducingLeft, inf, -v0 / mu_Y});
    // phi - phi0 = raw - raw(0) + (v0 / mu_Y) 1_Y, which vanishes at 0 by construction.
    const ObservableSpec tilde = obs.with_centering(obs.raw_value_at_zero(), obs.centering_record())
                                     .with_indicator({kInducingLeft, inf, v0 / mu_Y});
    return {phi0, tilde};
}

// ---------------------------------------------------------------------------

double sample_inducing_start(const MapSpec& spec, const DensitySpec& density, std::uint64_t burn_in, Rng& rng,
                             std::uint64_t cap) {
    double x = sample_initial(density, rng);
    for (std::uint64_t k = 0; k < burn_in; ++k) x = spec(x);
    for (std::uint64_t k = 0; x < kInducingLeft; ++k) {
        if (k == cap) throw TruncationError("sample_inducing_start: orbit did not enter Y", k);
        x = spec(x);
    }
    return x;
}

double estimate_mu_Y(const MapSpec& spec, std::uint64_t orbit_length, std::uint64_t burn_in,
                     std::uint64_t chains, std::uint64_t seed) {
    if (chains == 0 || orbit_length < chains)
        throw ValidationError("estimate_mu_Y: need orbit_length >= chains >= 1");
    const std::uint64_t per_chain = orbit_length / chains;
    std::vector<std::uint64_t> hits(chains, 0);

    for_each_task(Exec::Parallel, chains, [&](std::uint64_t c) {
        Rng rng = Rng::for_task(seed, Stream::MuY, c);
        double x = rng.uniform();
        for (std::uint64_t k = 0; k < burn_in; ++k) x = spec(x);
        std::uint64_t h = 0;
        for (std::uint64_t k = 0; k < per_chain; ++k) {
            x = spec(x);
            h += x >= kInducingLeft ? 1 : 0;
        }
        hits[c] = h;
    });
    const std::uint64_t total = std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
    return static_cast<double>(total) / static_cast<double>(per_chain * chains);
}

}  // namespace lsvwip
