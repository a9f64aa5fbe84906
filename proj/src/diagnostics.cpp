#include "lsvwip/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numeric>

#include "lsvwip/kernels.hpp"
#include "lsvwip/parallel.hpp"

namespace lsvwip {

// ---------------------------------------------------------------------------
// Reports

const char* to_string(Comparison c) noexcept {
    switch (c) {
        case Comparison::Less: return "<";
        case Comparison::LessEqual: return "<=";
        case Comparison::Greater: return ">";
        case Comparison::GreaterEqual: return ">=";
    }
    return "?";
}

bool compare(double value, Comparison c, double threshold) noexcept {
    switch (c) {
        case Comparison::Less: return value < threshold;
        case Comparison::LessEqual: return value <= threshold;
        case Comparison::Greater: return value > threshold;
        case Comparison::GreaterEqual: return value >= threshold;
    }
    return false;
}

void Table::add_row(std::vector<std::string> row) {
    if (row.size() != columns.size()) throw ValidationError("Table '" + name + "': row width mismatch");
    rows.push_back(std::move(row));
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_number(std::uint64_t x) { return std::to_string(x); }

const MetricCheck& SuiteReport::check(std::string name, double value, Comparison comparison, double threshold,
                                      std::string description) {
    metrics.push_back({std::move(name), value, comparison, threshold, compare(value, comparison, threshold),
                       std::move(description)});
    return metrics.back();
}

const MetricCheck* SuiteReport::find(const std::string& name) const {
    for (const auto& m : metrics)
        if (m.name == name) return &m;
    return nullptr;
}

bool SuiteReport::passed() const {
    return std::all_of(metrics.begin(), metrics.end(), [](const MetricCheck& m) { return m.pass; });
}

Json SuiteReport::to_json() const {
    Json out;
    out["suite"] = suite_name;
    out["passed"] = passed();
    Json ms = Json::array();
    for (const auto& m : metrics) {
        Json j;
        j["name"] = m.name;
        j["value"] = m.value;
        j["comparison"] = to_string(m.comparison);
        j["threshold"] = m.threshold;
        j["pass"] = m.pass;
        j["description"] = m.description;
        ms.push_back(std::move(j));
    }
    out["metrics"] = std::move(ms);
    out["metadata"] = metadata;
    Json ts = Json::array();
    for (const auto& t : tables) ts.push_back(t.name);
    out["tables"] = std::move(ts);
    return out;
}

// ---------------------------------------------------------------------------
// Statistics primitives

EmpiricalMeasure::EmpiricalMeasure(std::vector<double> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) throw ValidationError("EmpiricalMeasure: no samples");
    for (double x : samples_)
        if (std::isnan(x)) throw ValidationError("EmpiricalMeasure: NaN sample");
    std::sort(samples_.begin(), samples_.end());
}

double EmpiricalMeasure::ecdf(double x) const {
    const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
    return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double EmpiricalMeasure::ecdf_left(double x) const {
    const auto it = std::lower_bound(samples_.begin(), samples_.end(), x);
    return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double ks_distance(const EmpiricalMeasure& samples, const std::function<double(double)>& cdf) {
    if (samples.size() < 2) throw ValidationError("ks_distance: need at least 2 samples");
    const auto& xs = samples.samples();
    const double N = static_cast<double>(xs.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < xs.size()) {
        std::size_t j = i;
        while (j < xs.size() && xs[j] == xs[i]) ++j;
        const double x = xs[i];
        // ECDF(x-) = i / N and ECDF(x) = j / N; compare with F(x-) and F(x).
        const double f_left = cdf(std::nextafter(x, -std::numeric_limits<double>::infinity()));
        const double f = cdf(x);
        d = std::max({d, std::abs(static_cast<double>(i) / N - f_left), std::abs(static_cast<double>(j) / N - f)});
        i = j;
    }
    return d;
}

double two_sample_ks(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
    const auto& xa = a.samples();
    const auto& xb = b.samples();
    const double na = static_cast<double>(xa.size());
    const double nb = static_cast<double>(xb.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < xa.size() || j < xb.size()) {
        const double x = (j == xb.size() || (i < xa.size() && xa[i] <= xb[j])) ? xa[i] : xb[j];
        while (i < xa.size() && xa[i] == x) ++i;
        while (j < xb.size() && xb[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double quantile(std::vector<double> values, double p) {
    values.erase(std::remove_if(values.begin(), values.end(), [](double v) { return std::isnan(v); }), values.end());
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(values.size() - 1, lo + 1);
    const double w = pos - static_cast<double>(lo);
    return values[lo] + w * (values[hi] - values[lo]);
}

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y, std::size_t from, std::size_t to) {
    const double m = static_cast<double>(to - from);
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t i = from; i < to; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / m;
    const double my = sy / m;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = from; i < to; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw StatisticalError("tail_exponent: degenerate regression grid");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

}  // namespace

TailFit tail_exponent(const std::vector<std::uint64_t>& samples, std::uint64_t n_min, double flag_tolerance,
                      std::size_t grid_points) {
    if (samples.empty()) throw StatisticalError("tail_exponent: no samples");
    if (grid_points < 4) throw ValidationError("tail_exponent: need at least 4 grid points");
    std::vector<std::uint64_t> sorted(samples);
    std::sort(sorted.begin(), sorted.end());
    const double N = static_cast<double>(sorted.size());
    const auto exceed = [&](std::uint64_t n) {
        return static_cast<std::uint64_t>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), n));
    };

    TailFit fit;
    fit.n_min = n_min;
    fit.exceedances = exceed(n_min);
    if (fit.exceedances < kMinTailExceedances)
        throw StatisticalError("tail_exponent: only " + std::to_string(fit.exceedances) +
                               " samples exceed n_min (need " + std::to_string(kMinTailExceedances) + ")");
    // Upper end of the grid: keep at least 50 exceedances for a stable log-tail.
    constexpr std::uint64_t min_top = 50;
    const std::uint64_t top_value = sorted[sorted.size() - min_top];
    fit.n_max = top_value > 0 ? top_value - 1 : 0;
    if (fit.n_max <= n_min) throw StatisticalError("tail_exponent: tail too short above n_min");

    const double ratio = static_cast<double>(fit.n_max) / static_cast<double>(std::max<std::uint64_t>(n_min, 1));
    for (std::size_t g = 0; g < grid_points; ++g) {
        const double t = static_cast<double>(g) / static_cast<double>(grid_points - 1);
        const auto n = static_cast<std::uint64_t>(
            std::llround(static_cast<double>(std::max<std::uint64_t>(n_min, 1)) * std::pow(ratio, t)));
        if (fit.grid.empty() || n > fit.grid.back()) fit.grid.push_back(std::clamp(n, n_min, fit.n_max));
    }
    if (fit.grid.size() < 4) throw StatisticalError("tail_exponent: fewer than 4 distinct grid points");

    std::vector<double> lx;
    std::vector<double> ly;
    for (std::uint64_t n : fit.grid) {
        const double s = static_cast<double>(exceed(n)) / N;
        fit.tail.push_back(s);
        lx.push_back(std::log(static_cast<double>(n)));
        ly.push_back(std::log(s));
    }
    const std::size_t G = lx.size();
    fit.alpha_hat = -least_squares(lx, ly, 0, G).slope;
    fit.alpha_lower_half = -least_squares(lx, ly, 0, (G + 1) / 2).slope;
    fit.alpha_upper_half = -least_squares(lx, ly, G / 2, G).slope;
    fit.non_power_law = std::abs(fit.alpha_lower_half - fit.alpha_upper_half) > flag_tolerance * std::abs(fit.alpha_hat);
    return fit;
}

std::vector<std::uint64_t> pareto_samples(double alpha, std::uint64_t count, std::uint64_t seed) {
    if (!(alpha > 0.0)) throw ValidationError("pareto_samples: alpha must be positive");
    Rng rng = Rng::for_task(seed, Stream::Synthetic, 1);
    std::vector<std::uint64_t> out(count);
    for (auto& x : out) {
        const double v = std::pow(rng.uniform_open(), -1.0 / alpha);
        x = v >= 1.8e19 ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(std::ceil(v));
    }
    return out;
}

std::vector<std::uint64_t> geometric_samples(double p, std::uint64_t count, std::uint64_t seed) {
    if (!(p > 0.0 && p < 1.0)) throw ValidationError("geometric_samples: p must lie in (0,1)");
    Rng rng = Rng::for_task(seed, Stream::Synthetic, 2);
    const double lq = std::log1p(-p);
    std::vector<std::uint64_t> out(count);
    for (auto& x : out) x = 1 + static_cast<std::uint64_t>(std::floor(std::log(rng.uniform_open()) / lq));
    return out;
}

StepPath random_step_path(Rng& rng, double T, std::uint64_t max_jumps) {
    const std::uint64_t m = rng.next() % (max_jumps + 1);
    std::vector<double> times;
    for (std::uint64_t i = 0; i < m; ++i) {
        if (rng.uniform() < 0.5)
            times.push_back(T * static_cast<double>(1 + rng.next() % 20) / 20.0);
        else
            times.push_back(T * rng.uniform_open());
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    std::vector<double> values(times.size());
    for (auto& v : values) v = 2.0 * rng.uniform() - 1.0;
    return StepPath(T, 2.0 * rng.uniform() - 1.0, std::move(times), std::move(values));
}

// ---------------------------------------------------------------------------
// Calibration

std::uint64_t preimage_threshold(const MapSpec& spec, double epsilon) {
    if (!(epsilon > 0.0)) throw ValidationError("preimage_threshold: epsilon must be positive");
    std::size_t k = 64;
    for (;;) {
        const auto xs = preimage_sequence(spec, k);
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (xs[i] < epsilon) return i + 1;
        if (k > (std::size_t{1} << 26)) throw NumericError("preimage_threshold: epsilon too small");
        k *= 4;
    }
}

Json Calibration::to_json() const {
    Json j;
    j["gamma"] = spec.gamma();
    j["alpha"] = spec.alpha();
    j["observable"] = observable.describe();
    j["centering_offset"] = observable.centering_offset();
    const auto& rec = observable.centering_record();
    j["centering"] = {{"orbit_length", rec.orbit_length}, {"burn_in", rec.burn_in}, {"chains", rec.chains},
                      {"seed", rec.seed}};
    j["phi_at_zero_raw"] = observable.raw_value_at_zero();
    j["phi_at_zero"] = observable.value_at_zero();
    j["holder_exponent"] = observable.holder_exponent();
    j["sup_norm"] = sup_norm;
    j["h_half"] = density.h_half;
    j["density_samples"] = density.sample_count;
    j["density_bins"] = density.masses.size();
    j["density_low_quality"] = density.low_quality;
    j["mu_Y"] = mu_Y;
    j["mean_return"] = mean_return;
    j["sign_radius"] = sign_radius;
    j["k_threshold"] = k_threshold;
    j["phi_star_bound"] = phi_star_bound;
    const auto law_json = [](const std::optional<StableLaw>& law) {
        if (!law) return Json();
        return Json{{"alpha", law->alpha}, {"c", law->c}, {"skew_sign", law->skew_sign}};
    };
    j["full_law"] = law_json(full_law);
    j["induced_law"] = law_json(induced_law);
    return j;
}

Calibration calibrate(const MapSpec& spec, const ObservableSpec& raw_observable, const CalibrationParams& params,
                      std::uint64_t seed) {
    const ObservableSpec obs = calibrate_centering(spec, raw_observable, params.centering_orbit_length, params.burn_in,
                                                   params.centering_chains, derive_seed(seed, 1));
    DensityEstimate density = estimate_invariant_density(spec, params.density_orbit_length, params.density_bins,
                                                         params.burn_in, derive_seed(seed, 2));
    const double mu_Y =
        estimate_mu_Y(spec, params.mu_Y_orbit_length, params.burn_in, params.mu_Y_chains, derive_seed(seed, 3));
    if (!(mu_Y > 0.0 && mu_Y < 1.0)) throw StatisticalError("calibrate: mu(Y) estimate outside (0,1)");

    Calibration cal{spec, obs, std::move(density), mu_Y, 1.0 / mu_Y, obs.sup_norm(), obs.sign_radius(), 0, 0.0,
                    std::nullopt, std::nullopt};
    const double v0 = obs.value_at_zero();
    if (v0 != 0.0) {
        cal.k_threshold = preimage_threshold(spec, cal.sign_radius);
        cal.phi_star_bound = static_cast<double>(cal.k_threshold + 1) * cal.sup_norm;
        if (spec.heavy_tailed() && cal.density.h_half > 0.0) {
            cal.full_law = from_lsv_params(spec.gamma(), v0, cal.density.h_half);
            cal.induced_law = lift_to_induced_system(*cal.full_law, cal.mean_return);
        }
    } else {
        cal.phi_star_bound = std::numeric_limits<double>::infinity();
    }
    return cal;
}

namespace {

void require_law(const Calibration& cal, const char* suite) {
    if (!cal.full_law)
        throw HypothesisError(std::string(suite) + ": needs phi(0) != 0 and gamma in (1/2, 1) for the stable limit");
}

void require_nonzero_phi0(const Calibration& cal, const char* suite) {
    if (cal.observable.value_at_zero() == 0.0) throw HypothesisError(std::string(suite) + ": needs phi(0) != 0");
}

Json grid_json(const std::vector<std::uint64_t>& grid) {
    Json j = Json::array();
    for (auto n : grid) j.push_back(n);
    return j;
}

// Trend metric: largest step-to-step change along the grid; negative iff the curve
// decreases strictly at every step.
void check_trend(SuiteReport& rep, const std::string& name, const std::vector<double>& curve,
                 const std::string& what) {
    if (curve.size() < 2) throw ValidationError(name + ": a trend needs at least two grid points");
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t g = 1; g < curve.size(); ++g) worst = std::max(worst, curve[g] - curve[g - 1]);
    rep.check(name, worst, Comparison::Less, 0.0,
              what + ": largest increase between consecutive grid points (strict decrease required)");
}

}  // namespace

// ---------------------------------------------------------------------------
// Monotonicity

SuiteReport monotonicity_suite(const Calibration& cal, const MonotonicityParams& params, std::uint64_t seed) {
    require_nonzero_phi0(cal, "monotonicity_suite");
    SuiteReport rep;
    rep.suite_name = "monotonicity";

    InducedEnsembleParams ip;
    ip.orbits = params.orbits;
    ip.n_grid = params.n_grid;
    ip.burn_in = params.burn_in;
    ip.seed = seed;
    ip.value_at_zero = cal.observable.value_at_zero();
    ip.mu_Y = cal.mu_Y;
    ip.phi_star_bound = cal.phi_star_bound;
    const auto stats = induced_ensemble(cal.spec, cal.observable, ip);

    std::uint64_t excursions = 0;
    std::uint64_t violations = 0;
    std::uint64_t truncated = 0;
    double largest = 0.0;
    double eta = 0.0;
    for (const auto& s : stats) {
        if (s.truncated) {
            ++truncated;
            continue;
        }
        excursions += s.excursions;
        violations += s.bound_violations;
        largest = std::max(largest, s.largest_phi_star);
        eta = std::max(eta, s.implied_eta);
    }

    Table curve{"phi_star_curve", {"n", "median", "q25", "q75"}, {}};
    std::vector<double> medians;
    for (std::size_t g = 0; g < params.n_grid.size(); ++g) {
        std::vector<double> v;
        for (const auto& s : stats)
            if (!s.truncated) v.push_back(s.max_phi_star[g]);
        medians.push_back(median(v));
        curve.add_row({format_number(params.n_grid[g]), format_number(medians.back()), format_number(quantile(v, 0.25)),
                       format_number(quantile(v, 0.75))});
    }
    rep.tables.push_back(std::move(curve));

    check_trend(rep, "phi_star_curve_trend", medians, "median of B(n)^-1 max_{j<=n} Phi* o F^j");
    rep.check("phi_star_bound_violations", static_cast<double>(violations), Comparison::LessEqual,
              static_cast<double>(params.max_violations), "excursions with Phi* > (k+1)|phi|_inf");
    rep.check("excursions_checked", static_cast<double>(excursions), Comparison::GreaterEqual,
              static_cast<double>(params.min_excursions), "excursions entering the Phi* bound check");

    rep.metadata["n_grid"] = grid_json(params.n_grid);
    rep.metadata["orbits"] = params.orbits;
    rep.metadata["truncated_orbits"] = truncated;
    rep.metadata["largest_phi_star"] = largest;
    rep.metadata["phi_star_bound"] = cal.phi_star_bound;
    rep.metadata["k_threshold"] = cal.k_threshold;
    rep.metadata["epsilon"] = cal.sign_radius;
    rep.metadata["sup_norm"] = cal.sup_norm;
    rep.metadata["implied_eta"] = eta;
    return rep;
}

// ---------------------------------------------------------------------------
// Excursion inequality

double excursion_bound_rhs(const ScaledPathBundle& bundle) {
    double rhs = 0.0;
    const double n = static_cast<double>(bundle.n);
    for (const auto& e : bundle.excursions)
        rhs = std::max(rhs, static_cast<double>(e.return_time) / n + 2.0 * e.phi_star / bundle.B_n);
    return rhs;
}

ExcursionBoundTrial excursion_bound_trial(const MapSpec& spec, const ObservableSpec& obs, double y, std::uint64_t n,
                                          double T, double tolerance) {
    const ScaledPathBundle bundle = scaled_paths(spec, obs, y, n, T);
    ExcursionBoundTrial t;
    t.m1 = m1_distance(bundle.W_n, bundle.U_n, tolerance);
    if (t.m1.upper - t.m1.lower > tolerance)
        throw NumericError("excursion_bound_trial: M1 bracket wider than the requested tolerance");
    t.rhs = excursion_bound_rhs(bundle);
    const double last_start = bundle.excursion_starts.back();
    if (last_start < T)
        t.straddle = uniform_distance(restrict(bundle.W_n, last_start, T), restrict(bundle.U_n, last_start, T));
    t.rhs_corrected = std::max(t.rhs, t.straddle);
    return t;
}

SuiteReport excursion_bound_check(const Calibration& cal, const ExcursionBoundParams& params, std::uint64_t seed) {
    if (params.n < 10) throw ValidationError("excursion_bound_check: n must be >= 10");
    SuiteReport rep;
    rep.suite_name = "excursion_bound";
    const auto& spec = cal.spec;
    const auto& obs = cal.observable;

    std::vector<ExcursionBoundTrial> trials(params.trials);
    for_each_task(Exec::Parallel, params.trials, [&](std::uint64_t i) {
        Rng rng = Rng::for_task(seed, Stream::BoundTrials, i);
        const double y = sample_inducing_start(spec, DensitySpec::uniform(), params.burn_in, rng);
        trials[i] = excursion_bound_trial(spec, obs, y, params.n, params.T, params.tolerance);
    });

    Table tt{"trials", {"trial", "m1_lower", "m1_upper", "rhs", "straddle", "rhs_corrected", "margin"}, {}};
    std::uint64_t violations = 0;
    std::uint64_t corrected_violations = 0;
    std::vector<double> margins;
    for (std::uint64_t i = 0; i < trials.size(); ++i) {
        const auto& t = trials[i];
        const double margin = t.rhs + params.slack - t.m1.lower;
        margins.push_back(margin);
        if (margin < 0.0) ++violations;
        if (t.rhs_corrected + params.slack - t.m1.lower < 0.0) ++corrected_violations;
        tt.add_row({format_number(i), format_number(t.m1.lower), format_number(t.m1.upper), format_number(t.rhs),
                    format_number(t.straddle), format_number(t.rhs_corrected), format_number(margin)});
    }
    rep.tables.push_back(std::move(tt));

    // RHS along n (no metric evaluation needed).
    Table tr{"rhs_by_n", {"n", "median_rhs", "q25", "q75"}, {}};
    std::vector<double> medians;
    for (std::size_t g = 0; g < params.rhs_n_grid.size(); ++g) {
        const std::uint64_t n = params.rhs_n_grid[g];
        std::vector<double> rhs(params.rhs_trials);
        for_each_task(Exec::Parallel, params.rhs_trials, [&](std::uint64_t i) {
            Rng rng = Rng::for_task(derive_seed(seed, n), Stream::BoundTrials, i);
            const double y = sample_inducing_start(spec, DensitySpec::uniform(), params.burn_in, rng);
            rhs[i] = excursion_bound_rhs(scaled_paths(spec, obs, y, n, params.T));
        });
        medians.push_back(median(rhs));
        tr.add_row({format_number(n), format_number(medians.back()), format_number(quantile(rhs, 0.25)),
                    format_number(quantile(rhs, 0.75))});
    }
    rep.tables.push_back(std::move(tr));

    rep.check("lemma_violations", static_cast<double>(violations), Comparison::LessEqual,
              static_cast<double>(params.max_violations),
              "trials with d_M1(W_n,U_n).lower > max_j (r/n + 2 Phi*/B) o F^j + slack");
    rep.check("endpoint_corrected_violations", static_cast<double>(corrected_violations), Comparison::LessEqual,
              static_cast<double>(params.max_violations),
              "trials with d_M1(W_n,U_n).lower > max(rhs, straddle term of the incomplete last excursion) + slack");
    check_trend(rep, "rhs_median_trend", medians, "median right-hand side");

    rep.metadata["n"] = params.n;
    rep.metadata["T"] = params.T;
    rep.metadata["trials"] = params.trials;
    rep.metadata["tolerance"] = params.tolerance;
    rep.metadata["slack"] = params.slack;
    rep.metadata["min_margin"] = *std::min_element(margins.begin(), margins.end());
    rep.metadata["median_margin"] = median(margins);
    rep.metadata["rhs_n_grid"] = grid_json(params.rhs_n_grid);
    return rep;
}

// ---------------------------------------------------------------------------
// Lap numbers

double lap_sup_error(const LapTrace& trace, std::uint64_t k, double T, double mu_Y) {
    const std::uint64_t M = grid_steps(T, k);
    if (M > trace.horizon) throw ValidationError("lap_sup_error: trace horizon shorter than floor(Tk)");
    const double kd = static_cast<double>(k);
    double sup = 0.0;
    for (std::uint64_t m = 0; m <= M; ++m) {
        const double a = static_cast<double>(trace.lap_numbers[m]) / kd;
        const double t0 = std::min(T, static_cast<double>(m) / kd);
        const double t1 = std::min(T, static_cast<double>(m + 1) / kd);
        sup = std::max({sup, std::abs(a - mu_Y * t0), std::abs(a - mu_Y * t1)});
    }
    return sup;
}

SuiteReport lap_sllns(const Calibration& cal, const LapParams& params, std::uint64_t seed) {
    if (!(params.T > 0.0)) throw ValidationError("lap_sllns: T must be positive");
    SuiteReport rep;
    rep.suite_name = "lap_sllns";
    const auto& spec = cal.spec;

    Table ts{"sup_error", {"k", "median", "q25", "q75"}, {}};
    std::vector<double> medians;
    for (const std::uint64_t k : params.k_grid) {
        std::vector<double> err(params.trials);
        const std::uint64_t horizon = grid_steps(params.T, k);
        for_each_task(Exec::Parallel, params.trials, [&](std::uint64_t i) {
            Rng rng = Rng::for_task(derive_seed(seed, k), Stream::LapTrials, i);
            const double y = sample_inducing_start(spec, DensitySpec::uniform(), params.burn_in, rng);
            const LapTrace trace = lap_numbers(spec, y, std::max<std::uint64_t>(horizon, 1));
            err[i] = lap_sup_error(trace, k, params.T, cal.mu_Y);
        });
        medians.push_back(median(err));
        ts.add_row({format_number(k), format_number(medians.back()), format_number(quantile(err, 0.25)),
                    format_number(quantile(err, 0.75))});
    }
    rep.tables.push_back(std::move(ts));
    check_trend(rep, "sup_error_trend", medians, "median sup_t |N_{floor(tk)}/k - t mu(Y)|");

    ExcursionChainParams ep;
    ep.chains = params.kac_chains;
    ep.per_chain = params.kac_excursions / params.kac_chains;
    ep.burn_in = params.burn_in;
    ep.seed = seed;
    const auto r = excursion_return_times(spec, ep);
    const double total = std::accumulate(r.begin(), r.end(), 0.0, [](double a, std::uint64_t b) {
        return a + static_cast<double>(b);
    });
    const double r_bar = total / static_cast<double>(r.size());
    const double kac = cal.mu_Y * r_bar;
    rep.check("kac_deviation", std::abs(kac - 1.0), Comparison::Less, params.kac_tolerance,
              "|mu(Y) * mean return time - 1| (Kac)");

    rep.metadata["T"] = params.T;
    rep.metadata["k_grid"] = grid_json(params.k_grid);
    rep.metadata["trials"] = params.trials;
    rep.metadata["mu_Y"] = cal.mu_Y;
    rep.metadata["kac_excursions"] = r.size();
    rep.metadata["mean_return"] = r_bar;
    rep.metadata["kac_product"] = kac;
    return rep;
}

// ---------------------------------------------------------------------------
// Tail exponent

SuiteReport tail_exponent_suite(const Calibration& cal, const TailParams& params, std::uint64_t seed) {
    SuiteReport rep;
    rep.suite_name = "tail_exponent";

    ExcursionChainParams ep;
    ep.chains = params.chains;
    ep.per_chain = params.excursions / params.chains;
    ep.burn_in = params.burn_in;
    ep.seed = seed;
    const auto r = excursion_return_times(cal.spec, ep);
    const TailFit lsv = tail_exponent(r, params.n_min);
    const double alpha = cal.spec.alpha();
    rep.check("lsv_alpha_rel_error", std::abs(lsv.alpha_hat - alpha) / alpha, Comparison::Less, params.rel_tolerance,
              "|alpha_hat - 1/gamma| / (1/gamma) for LSV return times");

    const auto pareto = pareto_samples(params.pareto_alpha, params.pareto_samples, seed);
    const TailFit pf = tail_exponent(pareto, params.n_min);
    rep.check("pareto_alpha_rel_error", std::abs(pf.alpha_hat - params.pareto_alpha) / params.pareto_alpha,
              Comparison::Less, params.pareto_rel_tolerance, "synthetic Pareto control");

    const auto geo = geometric_samples(params.geometric_p, params.geometric_samples, seed);
    const TailFit gf = tail_exponent(geo, 1);
    rep.check("geometric_flagged", gf.non_power_law ? 1.0 : 0.0, Comparison::GreaterEqual, 1.0,
              "synthetic geometric control is flagged as non-power-law");

    Table tf{"tail_fit", {"n", "empirical_tail"}, {}};
    for (std::size_t i = 0; i < lsv.grid.size(); ++i)
        tf.add_row({format_number(lsv.grid[i]), format_number(lsv.tail[i])});
    rep.tables.push_back(std::move(tf));

    const auto fit_json = [](const TailFit& f) {
        return Json{{"alpha_hat", f.alpha_hat},         {"alpha_lower_half", f.alpha_lower_half},
                    {"alpha_upper_half", f.alpha_upper_half}, {"non_power_law", f.non_power_law},
                    {"n_min", f.n_min},                 {"n_max", f.n_max},
                    {"exceedances", f.exceedances}};
    };
    rep.metadata["excursions"] = r.size();
    rep.metadata["expected_alpha"] = alpha;
    rep.metadata["lsv"] = fit_json(lsv);
    rep.metadata["pareto"] = fit_json(pf);
    rep.metadata["pareto_alpha"] = params.pareto_alpha;
    rep.metadata["geometric"] = fit_json(gf);
    rep.metadata["geometric_p"] = params.geometric_p;
    return rep;
}

// ---------------------------------------------------------------------------
// WIP marginals

SuiteReport wip_marginal_suite(const Calibration& cal, const WipParams& params, std::uint64_t seed) {
    require_law(cal, "wip_marginal_suite");
    SuiteReport rep;
    rep.suite_name = "wip_marginal";
    const auto& grid = params.n_grid;
    const CdfTable induced_cdf(*cal.induced_law);
    const CdfTable full_cdf(*cal.full_law);

    InducedEnsembleParams ip;
    ip.orbits = params.samples;
    ip.n_grid = grid;
    ip.burn_in = params.burn_in;
    ip.seed = seed;
    ip.value_at_zero = cal.observable.value_at_zero();
    ip.mu_Y = cal.mu_Y;
    ip.phi_star_bound = cal.phi_star_bound;
    const auto induced = induced_ensemble(cal.spec, cal.observable, ip);

    FullEnsembleParams fp;
    fp.orbits = params.samples;
    fp.n_grid = grid;
    fp.seed = seed;
    const auto full = full_ensemble(cal.spec, cal.observable, fp);
    FullEnsembleParams ap = fp;
    ap.start_density = params.alt_density;
    ap.stream = Stream::AltFullEnsemble;
    const auto alt = full_ensemble(cal.spec, cal.observable, ap);

    std::uint64_t truncated = 0;
    for (const auto& s : induced) truncated += s.truncated ? 1 : 0;

    Table tk{"ks_by_n", {"n", "induced_ks", "full_ks", "strong_two_sample_ks", "holder_median", "induced_ks_unlifted"}, {}};
    std::vector<double> induced_ks;
    std::vector<double> full_ks;
    std::vector<double> holder;
    double strong_ks = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        std::vector<double> p;
        std::vector<double> h;
        for (const auto& s : induced) {
            if (s.truncated) continue;
            p.push_back(s.head[g]);
            h.push_back(s.max_abs_tilde[g]);
        }
        std::vector<double> w;
        std::vector<double> wa;
        for (std::size_t i = 0; i < full.size(); ++i) {
            w.push_back(full[i][g]);
            wa.push_back(alt[i][g]);
        }
        const EmpiricalMeasure pm(p);
        const EmpiricalMeasure wm(w);
        induced_ks.push_back(ks_distance(pm, [&](double x) { return induced_cdf(x); }));
        full_ks.push_back(ks_distance(wm, [&](double x) { return full_cdf(x); }));
        holder.push_back(median(h));
        strong_ks = two_sample_ks(wm, EmpiricalMeasure(wa));
        const double unlifted = ks_distance(pm, [&](double x) { return full_cdf(x); });
        tk.add_row({format_number(grid[g]), format_number(induced_ks.back()), format_number(full_ks.back()),
                    format_number(strong_ks), format_number(holder.back()), format_number(unlifted)});
    }
    rep.tables.push_back(std::move(tk));

    check_trend(rep, "induced_ks_trend", induced_ks, "KS of P_n(1) vs the induced stable law");
    rep.check("induced_ks_final", induced_ks.back(), Comparison::Less, params.induced_final_ks,
              "KS of P_n(1) vs the induced stable law at the largest n");
    check_trend(rep, "full_ks_trend", full_ks, "KS of W_n(1) vs the full-system stable law");
    rep.check("strong_convergence_ks", strong_ks, Comparison::Less, params.strong_ks,
              "two-sample KS of W_n(1) from two initial densities at the largest n");
    check_trend(rep, "holder_part_trend", holder, "median of n^{-1/alpha} max_{j<=n} |Phi~_j|");

    rep.metadata["n_grid"] = grid_json(grid);
    rep.metadata["samples"] = params.samples;
    rep.metadata["alt_density"] = params.alt_density.describe();
    rep.metadata["truncated_orbits"] = truncated;
    return rep;
}

// ---------------------------------------------------------------------------
// Topology probe

SuiteReport topology_probe(const Calibration& cal, const TopologyParams& params, std::uint64_t seed) {
    require_law(cal, "topology_probe");
    SuiteReport rep;
    rep.suite_name = "topology_probe";
    const auto& grid = params.n_grid;
    const StableLaw& law = *cal.full_law;

    FullEnsembleParams fp;
    fp.orbits = params.samples;
    fp.n_grid = grid;
    fp.seed = seed;

    const LevyPathConfig fine{1.0, 1.0 / static_cast<double>(grid.back())};
    const auto levy_fine = levy_path_functionals(law, fine, params.levy_paths, derive_seed(seed, 1));
    std::vector<double> levy_sup;
    for (const auto& f : levy_fine) levy_sup.push_back(f.sup);
    const EmpiricalMeasure levy_sup_m(levy_sup);

    Table tb{"by_n", {"n", "max_scaled_jump", "levy_max_jump_median", "sup_two_sample_ks"}, {}};
    std::uint64_t violations = 0;
    std::vector<double> levy_medians;
    std::vector<double> sup_ks;
    double largest_scaled = 0.0;
    for (const std::uint64_t n : grid) {
        const auto paths = full_path_functionals(cal.spec, cal.observable, n, fp);
        const double B = normalizer(cal.spec, static_cast<double>(n));
        double max_scaled = 0.0;
        std::vector<double> sups;
        for (const auto& p : paths) {
            const double scaled = p.max_jump * B;
            if (scaled > cal.sup_norm) ++violations;
            max_scaled = std::max(max_scaled, scaled);
            sups.push_back(p.sup);
        }
        largest_scaled = std::max(largest_scaled, max_scaled);
        const LevyPathConfig cfg{1.0, 1.0 / static_cast<double>(n)};
        const auto levy =
            n == grid.back() ? levy_fine : levy_path_functionals(law, cfg, params.levy_paths, derive_seed(seed, 1));
        std::vector<double> jumps;
        for (const auto& f : levy) jumps.push_back(f.max_jump);
        levy_medians.push_back(median(jumps));
        sup_ks.push_back(two_sample_ks(EmpiricalMeasure(sups), levy_sup_m));
        tb.add_row({format_number(n), format_number(max_scaled), format_number(levy_medians.back()),
                    format_number(sup_ks.back())});
    }
    rep.tables.push_back(std::move(tb));

    rep.check("jump_bound_violations", static_cast<double>(violations), Comparison::LessEqual, 0.0,
              "paths with max_jump(W_n) * n^{1/alpha} > |phi|_inf");
    rep.check("levy_max_jump_median_rel_change", std::abs(levy_medians.back() / levy_medians.front() - 1.0),
              Comparison::LessEqual, params.levy_median_rel_tolerance,
              "relative change of the Levy-path max-jump median between the smallest and largest n");
    check_trend(rep, "sup_ks_trend", sup_ks, "two-sample KS of sup W_n vs sup of Levy paths");

    rep.metadata["n_grid"] = grid_json(grid);
    rep.metadata["samples"] = params.samples;
    rep.metadata["levy_paths"] = params.levy_paths;
    rep.metadata["sup_norm"] = cal.sup_norm;
    rep.metadata["largest_scaled_jump"] = largest_scaled;
    return rep;
}

// ---------------------------------------------------------------------------
// Stable-law consistency

SuiteReport stable_consistency(const Calibration& cal, const StableCheckParams& params, std::uint64_t seed) {
    require_law(cal, "stable_consistency");
    SuiteReport rep;
    rep.suite_name = "stable_consistency";
    const StableLaw& law = *cal.full_law;
    const CdfTable table(law);

    const auto xs = sample_many(law, params.samples, seed, Stream::StableSamples);
    const EmpiricalMeasure xm(xs);
    rep.check("sampler_cdf_ks", ks_distance(xm, [&](double x) { return table(x); }), Comparison::Less,
              params.ks_tolerance, "KS of sampler output vs the inverted characteristic function");

    Table tc{"ecf", {"t", "ecf_re", "ecf_im", "cf_re", "cf_im", "abs_error"}, {}};
    double cf_err = 0.0;
    for (std::uint64_t g = 0; g < params.cf_grid_points; ++g) {
        const double t = -2.0 + 4.0 * static_cast<double>(g) / static_cast<double>(params.cf_grid_points - 1);
        std::complex<double> acc = 0.0;
        for (double x : xs) acc += std::polar(1.0, t * x);
        acc /= static_cast<double>(xs.size());
        const auto exact = cf(law, t);
        const double e = std::abs(acc - exact);
        cf_err = std::max(cf_err, e);
        tc.add_row({format_number(t), format_number(acc.real()), format_number(acc.imag()), format_number(exact.real()),
                    format_number(exact.imag()), format_number(e)});
    }
    rep.tables.push_back(std::move(tc));
    rep.check("ecf_sup_error", cf_err, Comparison::Less, params.cf_tolerance,
              "sup over t in [-2,2] of |empirical CF - closed-form CF|");

    std::vector<double> sums(params.sum_samples);
    const double norm = std::pow(static_cast<double>(params.sum_terms), 1.0 / law.alpha);
    for_each_task(Exec::Parallel, params.sum_samples, [&](std::uint64_t i) {
        Rng rng = Rng::for_task(seed, Stream::Synthetic, i);
        double s = 0.0;
        for (std::uint64_t j = 0; j < params.sum_terms; ++j) s += sample(law, rng);
        sums[i] = s / norm;
    });
    const auto direct = sample_many(law, params.sum_samples, derive_seed(seed, 1), Stream::StableSamples);
    rep.check("stability_ks", two_sample_ks(EmpiricalMeasure(sums), EmpiricalMeasure(direct)), Comparison::Less,
              params.sum_ks_tolerance, "two-sample KS of normalized sums vs direct draws");

    const LevyPathConfig cfg{1.0, params.levy_grid_step};
    std::vector<double> w1(params.levy_paths);
    std::vector<double> w05(params.levy_paths);
    for_each_task(Exec::Parallel, params.levy_paths, [&](std::uint64_t i) {
        Rng rng = Rng::for_task(seed, Stream::LevyPaths, i);
        const StepPath w = sample_levy_path(law, cfg, rng);
        w1[i] = w(1.0);
        w05[i] = w(0.5);
    });
    const auto g1 = sample_many(law, params.levy_paths, derive_seed(seed, 2), Stream::StableSamples);
    auto g05 = sample_many(law, params.levy_paths, derive_seed(seed, 3), Stream::StableSamples);
    for (auto& x : g05) x *= std::pow(0.5, 1.0 / law.alpha);
    rep.check("levy_marginal_ks_t1", two_sample_ks(EmpiricalMeasure(w1), EmpiricalMeasure(g1)), Comparison::Less,
              params.levy_ks_tolerance, "two-sample KS of W(1) vs G");
    rep.check("levy_marginal_ks_t05", two_sample_ks(EmpiricalMeasure(w05), EmpiricalMeasure(g05)), Comparison::Less,
              params.levy_ks_tolerance, "two-sample KS of W(1/2) vs 2^{-1/alpha} G");

    rep.metadata["law"] = {{"alpha", law.alpha}, {"c", law.c}, {"skew_sign", law.skew_sign}};
    rep.metadata["samples"] = params.samples;
    rep.metadata["sum_samples"] = params.sum_samples;
    rep.metadata["sum_terms"] = params.sum_terms;
    rep.metadata["levy_paths"] = params.levy_paths;
    return rep;
}

// ---------------------------------------------------------------------------
// Metric checks

SuiteReport metric_checks(const MetricCheckParams& params, std::uint64_t seed) {
    SuiteReport rep;
    rep.suite_name = "metric_checks";
    const double tol = params.tolerance;

    const StepPath unit(1.0, 0.0, {0.5}, {1.0});
    const StepPath halves(1.0, 0.0, {0.5, 0.5 + params.delta}, {0.5, 1.0});
    const MetricResult j1 = j1_distance(unit, halves, tol);
    const MetricResult m1 = m1_distance(unit, halves, tol);
    rep.check("golden_j1_lower", j1.lower, Comparison::GreaterEqual, params.j1_lower_min,
              "J1 lower bound: unit jump vs two half-jumps delta apart");
    rep.check("golden_m1_upper", m1.upper, Comparison::LessEqual, params.m1_upper_max,
              "M1 upper bound: unit jump vs two half-jumps delta apart");

    struct Trial {
        double j_ab, j_ba, m_ab, m_ba, u_ab, j_ac, j_cb, m_ac, m_cb, j_aa, m_aa;
    };
    std::vector<Trial> trials(params.trials);
    for_each_task(Exec::Parallel, params.trials, [&](std::uint64_t i) {
        Rng rng = Rng::for_task(seed, Stream::Demo, i);
        const StepPath a = random_step_path(rng, 1.0, params.max_jumps);
        const StepPath b = random_step_path(rng, 1.0, params.max_jumps);
        const StepPath c = random_step_path(rng, 1.0, params.max_jumps);
        trials[i] = {j1_distance(a, b, tol).upper, j1_distance(b, a, tol).upper, m1_distance(a, b, tol).upper,
                     m1_distance(b, a, tol).upper, uniform_distance(a, b),        j1_distance(a, c, tol).upper,
                     j1_distance(c, b, tol).upper, m1_distance(a, c, tol).upper, m1_distance(c, b, tol).upper,
                     j1_distance(a, a, tol).lower, m1_distance(a, a, tol).lower};
    });

    std::uint64_t order = 0;
    std::uint64_t symmetry = 0;
    std::uint64_t triangle = 0;
    std::uint64_t identity = 0;
    Table tt{"trials", {"trial", "j1_ab", "j1_ba", "m1_ab", "m1_ba", "uniform_ab"}, {}};
    for (std::uint64_t i = 0; i < trials.size(); ++i) {
        const auto& t = trials[i];
        if (t.m_ab > t.j_ab + params.order_slack || t.j_ab > t.u_ab + tol) ++order;
        if (std::abs(t.j_ab - t.j_ba) > 2.0 * tol || std::abs(t.m_ab - t.m_ba) > 2.0 * tol) ++symmetry;
        if (t.j_ab > t.j_ac + t.j_cb + 3.0 * tol || t.m_ab > t.m_ac + t.m_cb + 3.0 * tol) ++triangle;
        if (t.j_aa != 0.0 || t.m_aa != 0.0) ++identity;
        tt.add_row({format_number(i), format_number(t.j_ab), format_number(t.j_ba), format_number(t.m_ab),
                    format_number(t.m_ba), format_number(t.u_ab)});
    }
    rep.tables.push_back(std::move(tt));
    rep.check("order_violations", static_cast<double>(order), Comparison::LessEqual, 0.0,
              "pairs with M1.upper > J1.upper + slack or J1.upper > uniform + tol");
    rep.check("symmetry_violations", static_cast<double>(symmetry), Comparison::LessEqual, 0.0,
              "pairs with |d(a,b) - d(b,a)| > 2 tol");
    rep.check("triangle_violations", static_cast<double>(triangle), Comparison::LessEqual, 0.0,
              "triples with d(a,b) > d(a,c) + d(c,b) + 3 tol");
    rep.check("identity_violations", static_cast<double>(identity), Comparison::LessEqual, 0.0,
              "paths whose self-distance bracket does not contain 0");

    rep.metadata["trials"] = params.trials;
    rep.metadata["tolerance"] = tol;
    rep.metadata["delta"] = params.delta;
    rep.metadata["golden_j1"] = {{"lower", j1.lower}, {"upper", j1.upper}};
    rep.metadata["golden_m1"] = {{"lower", m1.lower}, {"upper", m1.upper}};
    return rep;
}

}  // namespace lsvwip
