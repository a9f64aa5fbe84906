#include "lsvwip/app/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

namespace lsvwip::app {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Best-effort source location of a key: the line of its first quoted occurrence.
std::string locate(const std::string& text, const std::string& key) {
    const std::string needle = "\"" + key + "\"";
    const auto pos = text.find(needle);
    if (pos == std::string::npos) return "";
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n');
    return " (line " + std::to_string(line) + ")";
}

class Reader {
public:
    Reader(const Json& j, std::string path, const std::string& text) : j_(j), path_(std::move(path)), text_(text) {
        if (!j_.is_object()) fail(path_, "expected an object");
    }

    [[noreturn]] void fail(const std::string& field, const std::string& what) const {
        const auto dot = field.rfind('.');
        const std::string key = dot == std::string::npos ? field : field.substr(dot + 1);
        throw ConfigError("config error at '" + field + "'" + locate(text_, key) + ": " + what);
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const Json* get(const std::string& key) {
        seen_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void real(const std::string& key, double& out, const std::function<bool(double)>& ok = {},
              const std::string& requirement = "") {
        const Json* v = get(key);
        if (!v) return;
        if (!v->is_number()) fail(field(key), "expected a number");
        const double x = v->get<double>();
        if (!std::isfinite(x) || (ok && !ok(x))) fail(field(key), "value must be " + requirement);
        out = x;
    }

    void count(const std::string& key, std::uint64_t& out, std::uint64_t min = 0) {
        const Json* v = get(key);
        if (!v) return;
        out = to_u64(*v, field(key));
        if (out < min) fail(field(key), "value must be >= " + std::to_string(min));
    }

    void boolean(const std::string& key, bool& out) {
        const Json* v = get(key);
        if (!v) return;
        if (!v->is_boolean()) fail(field(key), "expected true or false");
        out = v->get<bool>();
    }

    void grid(const std::string& key, std::vector<std::uint64_t>& out, std::size_t min_points) {
        const Json* v = get(key);
        if (!v) return;
        if (!v->is_array()) fail(field(key), "expected an array of positive integers");
        std::vector<std::uint64_t> g;
        for (std::size_t i = 0; i < v->size(); ++i) g.push_back(to_u64((*v)[i], field(key) + "[" + std::to_string(i) + "]"));
        if (g.size() < min_points) fail(field(key), "needs at least " + std::to_string(min_points) + " entries");
        for (std::size_t i = 0; i < g.size(); ++i)
            if (g[i] < 1 || (i > 0 && g[i] <= g[i - 1])) fail(field(key), "entries must be >= 1 and strictly increasing");
        out = std::move(g);
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) fail(field(it.key()), "unknown key '" + it.key() + "'");
    }

    const std::string& text() const { return text_; }

private:
    std::uint64_t to_u64(const Json& v, const std::string& where) const {
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_integer()) {
            if (v.get<std::int64_t>() < 0) fail(where, "expected a non-negative integer");
            return static_cast<std::uint64_t>(v.get<std::int64_t>());
        }
        if (v.is_number_float()) {
            const double x = v.get<double>();
            if (x >= 0.0 && x < 1.8e19 && std::floor(x) == x) return static_cast<std::uint64_t>(x);
        }
        fail(where, "expected a non-negative integer");
    }

    const Json& j_;
    std::string path_;
    const std::string& text_;
    std::set<std::string> seen_;
};

const auto positive = [](double x) { return x > 0.0; };
const auto nonneg = [](double x) { return x >= 0.0; };
const auto unit_open = [](double x) { return x > 0.0 && x < 1.0; };

DensitySpec parse_density(const Json& j, const std::string& path, const std::string& text) {
    Reader r(j, path, text);
    std::string family = "uniform";
    if (const Json* f = r.get("family")) {
        if (!f->is_string()) r.fail(r.field("family"), "expected a string");
        family = f->get<std::string>();
    }
    std::vector<double> params;
    if (const Json* p = r.get("parameters")) {
        if (!p->is_array()) r.fail(r.field("parameters"), "expected an array of numbers");
        for (const auto& x : *p) {
            if (!x.is_number()) r.fail(r.field("parameters"), "expected an array of numbers");
            params.push_back(x.get<double>());
        }
    }
    r.finish();
    try {
        if (family == "uniform") {
            if (!params.empty()) r.fail(r.field("parameters"), "uniform takes no parameters");
            return DensitySpec::uniform();
        }
        if (family == "polynomial") return DensitySpec::polynomial(params);
        if (family == "histogram") return DensitySpec::histogram(params);
    } catch (const ValidationError& e) {
        r.fail(path, e.what());
    }
    r.fail(r.field("family"), "unknown density family '" + family + "' (uniform, polynomial, histogram)");
}

Json density_json(const DensitySpec& d) {
    const char* fam = d.family() == DensityFamily::Uniform      ? "uniform"
                      : d.family() == DensityFamily::Polynomial ? "polynomial"
                                                                : "histogram";
    return Json{{"family", fam}, {"parameters", d.parameters()}};
}

ObservableSpec parse_observable(const Json& j, const std::string& text) {
    Reader r(j, "observable", text);
    std::string family = "affine";
    if (const Json* f = r.get("family")) {
        if (!f->is_string()) r.fail("observable.family", "expected a string");
        family = f->get<std::string>();
    }
    double a = 0.0;
    double b = 0.0;
    double eta = 1.0;
    r.real("a", a);
    r.real("b", b);
    r.real("eta", eta, [](double x) { return x > 0.0 && x <= 1.0; }, "in (0, 1]");
    std::vector<IndicatorTerm> terms;
    if (const Json* ind = r.get("indicators")) {
        if (!ind->is_array()) r.fail("observable.indicators", "expected an array");
        for (std::size_t i = 0; i < ind->size(); ++i) {
            const std::string p = "observable.indicators[" + std::to_string(i) + "]";
            Reader t((*ind)[i], p, text);
            IndicatorTerm term{0.0, kInf, 0.0};
            t.real("left", term.left, [](double x) { return x >= 0.0 && x <= 1.0; }, "in [0, 1]");
            if (const Json* right = t.get("right")) {
                if (right->is_string() && right->get<std::string>() == "inf")
                    term.right = kInf;
                else if (right->is_number())
                    term.right = right->get<double>();
                else
                    t.fail(p + ".right", "expected a number or \"inf\"");
            }
            t.real("weight", term.weight);
            t.finish();
            if (!(term.left < term.right)) t.fail(p, "left must be < right");
            terms.push_back(term);
        }
    }
    r.finish();
    ObservableSpec obs = ObservableSpec::affine(a, b);
    if (family == "power")
        obs = ObservableSpec::power(a, b, eta);
    else if (family != "affine")
        r.fail("observable.family", "unknown family '" + family + "' (affine, power)");
    else if (j.contains("eta"))
        r.fail("observable.eta", "eta applies to the power family only");
    for (const auto& t : terms) obs = obs.with_indicator(t);
    return obs;
}

Json observable_json(const ObservableSpec& o) {
    Json j;
    j["family"] = o.family() == ObservableFamily::Affine ? "affine" : "power";
    j["a"] = o.a();
    j["b"] = o.b();
    if (o.family() == ObservableFamily::Power) j["eta"] = o.eta();
    Json ind = Json::array();
    for (const auto& t : o.indicators()) {
        Json tj;
        tj["left"] = t.left;
        if (std::isinf(t.right))
            tj["right"] = "inf";
        else
            tj["right"] = t.right;
        tj["weight"] = t.weight;
        ind.push_back(std::move(tj));
    }
    j["indicators"] = std::move(ind);
    return j;
}

// Opens a suite section; returns false when the suite is disabled.
bool suite_enabled(Reader& r) {
    bool enabled = true;
    r.boolean("enabled", enabled);
    return enabled;
}

MetricCheckParams parse_metric(Reader& r) {
    MetricCheckParams p;
    r.count("trials", p.trials, 1);
    r.real("tolerance", p.tolerance, positive, "positive");
    r.real("delta", p.delta, unit_open, "in (0, 1)");
    r.real("j1_lower_min", p.j1_lower_min);
    r.real("m1_upper_max", p.m1_upper_max);
    r.real("order_slack", p.order_slack, nonneg, "non-negative");
    r.count("max_jumps", p.max_jumps);
    return p;
}

Json metric_json(const MetricCheckParams& p) {
    return Json{{"trials", p.trials},           {"tolerance", p.tolerance},       {"delta", p.delta},
                {"j1_lower_min", p.j1_lower_min}, {"m1_upper_max", p.m1_upper_max}, {"order_slack", p.order_slack},
                {"max_jumps", p.max_jumps}};
}

StableCheckParams parse_stable(Reader& r) {
    StableCheckParams p;
    r.count("samples", p.samples, 2);
    r.real("ks_tolerance", p.ks_tolerance, positive, "positive");
    r.count("cf_grid_points", p.cf_grid_points, 2);
    r.real("cf_tolerance", p.cf_tolerance, positive, "positive");
    r.count("sum_samples", p.sum_samples, 2);
    r.count("sum_terms", p.sum_terms, 1);
    r.real("sum_ks_tolerance", p.sum_ks_tolerance, positive, "positive");
    r.count("levy_paths", p.levy_paths, 2);
    r.real("levy_grid_step", p.levy_grid_step, [](double x) { return x > 0.0 && x <= 0.5; }, "in (0, 1/2]");
    r.real("levy_ks_tolerance", p.levy_ks_tolerance, positive, "positive");
    return p;
}

Json stable_json(const StableCheckParams& p) {
    return Json{{"samples", p.samples},
                {"ks_tolerance", p.ks_tolerance},
                {"cf_grid_points", p.cf_grid_points},
                {"cf_tolerance", p.cf_tolerance},
                {"sum_samples", p.sum_samples},
                {"sum_terms", p.sum_terms},
                {"sum_ks_tolerance", p.sum_ks_tolerance},
                {"levy_paths", p.levy_paths},
                {"levy_grid_step", p.levy_grid_step},
                {"levy_ks_tolerance", p.levy_ks_tolerance}};
}

TailParams parse_tail(Reader& r) {
    TailParams p;
    r.count("excursions", p.excursions, 1);
    r.count("chains", p.chains, 1);
    r.count("burn_in", p.burn_in);
    r.count("n_min", p.n_min, 1);
    r.real("rel_tolerance", p.rel_tolerance, positive, "positive");
    r.real("pareto_alpha", p.pareto_alpha, positive, "positive");
    r.count("pareto_samples", p.pareto_samples, 1);
    r.real("pareto_rel_tolerance", p.pareto_rel_tolerance, positive, "positive");
    r.real("geometric_p", p.geometric_p, unit_open, "in (0, 1)");
    r.count("geometric_samples", p.geometric_samples, 1);
    if (p.excursions % p.chains != 0) r.fail(r.field("excursions"), "must be a multiple of chains");
    return p;
}

Json tail_json(const TailParams& p) {
    return Json{{"excursions", p.excursions},
                {"chains", p.chains},
                {"burn_in", p.burn_in},
                {"n_min", p.n_min},
                {"rel_tolerance", p.rel_tolerance},
                {"pareto_alpha", p.pareto_alpha},
                {"pareto_samples", p.pareto_samples},
                {"pareto_rel_tolerance", p.pareto_rel_tolerance},
                {"geometric_p", p.geometric_p},
                {"geometric_samples", p.geometric_samples}};
}

ExcursionBoundParams parse_bound(Reader& r) {
    ExcursionBoundParams p;
    r.count("n", p.n, 10);
    r.real("T", p.T, positive, "positive");
    r.count("trials", p.trials, 1);
    r.real("tolerance", p.tolerance, positive, "positive");
    r.real("slack", p.slack, nonneg, "non-negative");
    r.count("max_violations", p.max_violations);
    r.grid("rhs_n_grid", p.rhs_n_grid, 2);
    r.count("rhs_trials", p.rhs_trials, 1);
    r.count("burn_in", p.burn_in);
    return p;
}

Json bound_json(const ExcursionBoundParams& p) {
    return Json{{"n", p.n},
                {"T", p.T},
                {"trials", p.trials},
                {"tolerance", p.tolerance},
                {"slack", p.slack},
                {"max_violations", p.max_violations},
                {"rhs_n_grid", p.rhs_n_grid},
                {"rhs_trials", p.rhs_trials},
                {"burn_in", p.burn_in}};
}

LapParams parse_lap(Reader& r) {
    LapParams p;
    r.real("T", p.T, positive, "positive");
    r.grid("k_grid", p.k_grid, 2);
    r.count("trials", p.trials, 1);
    r.count("burn_in", p.burn_in);
    r.count("kac_chains", p.kac_chains, 1);
    r.count("kac_excursions", p.kac_excursions, 1);
    r.real("kac_tolerance", p.kac_tolerance, positive, "positive");
    if (p.kac_excursions % p.kac_chains != 0) r.fail(r.field("kac_excursions"), "must be a multiple of kac_chains");
    return p;
}

Json lap_json(const LapParams& p) {
    return Json{{"T", p.T},
                {"k_grid", p.k_grid},
                {"trials", p.trials},
                {"burn_in", p.burn_in},
                {"kac_chains", p.kac_chains},
                {"kac_excursions", p.kac_excursions},
                {"kac_tolerance", p.kac_tolerance}};
}

MonotonicityParams parse_mono(Reader& r) {
    MonotonicityParams p;
    r.grid("n_grid", p.n_grid, 2);
    r.count("orbits", p.orbits, 1);
    r.count("burn_in", p.burn_in);
    r.count("max_violations", p.max_violations);
    r.count("min_excursions", p.min_excursions);
    return p;
}

Json mono_json(const MonotonicityParams& p) {
    return Json{{"n_grid", p.n_grid},
                {"orbits", p.orbits},
                {"burn_in", p.burn_in},
                {"max_violations", p.max_violations},
                {"min_excursions", p.min_excursions}};
}

WipParams parse_wip(Reader& r) {
    WipParams p;
    r.grid("n_grid", p.n_grid, 2);
    r.count("samples", p.samples, 2);
    r.count("burn_in", p.burn_in);
    if (const Json* d = r.get("alt_density")) p.alt_density = parse_density(*d, r.field("alt_density"), r.text());
    r.real("induced_final_ks", p.induced_final_ks, positive, "positive");
    r.real("strong_ks", p.strong_ks, positive, "positive");
    return p;
}

Json wip_json(const WipParams& p) {
    return Json{{"n_grid", p.n_grid},
                {"samples", p.samples},
                {"burn_in", p.burn_in},
                {"alt_density", density_json(p.alt_density)},
                {"induced_final_ks", p.induced_final_ks},
                {"strong_ks", p.strong_ks}};
}

TopologyParams parse_topology(Reader& r) {
    TopologyParams p;
    r.grid("n_grid", p.n_grid, 2);
    r.count("samples", p.samples, 2);
    r.count("levy_paths", p.levy_paths, 2);
    r.real("levy_median_rel_tolerance", p.levy_median_rel_tolerance, positive, "positive");
    return p;
}

Json topology_json(const TopologyParams& p) {
    return Json{{"n_grid", p.n_grid},
                {"samples", p.samples},
                {"levy_paths", p.levy_paths},
                {"levy_median_rel_tolerance", p.levy_median_rel_tolerance}};
}

template <class Params, class Parse>
void parse_suite(Reader& suites, const std::string& name, std::optional<Params>& out, Parse parse) {
    const Json* s = suites.get(name);
    if (!s) return;
    Reader r(*s, suites.field(name), suites.text());
    const bool enabled = suite_enabled(r);
    Params p = parse(r);
    r.finish();
    if (enabled) out = std::move(p);
}

}  // namespace

bool RunConfig::needs_calibration() const {
    return stable_consistency || tail_exponent || excursion_bound || lap_sllns || monotonicity || wip_marginal ||
           topology_probe;
}

RunConfig parse_config(const std::string& text) {
    Json root;
    try {
        root = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto byte = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n');
        throw ConfigError("config parse error at line " + std::to_string(line) + ": " + e.what());
    }
    RunConfig cfg;
    Reader r(root, "", text);
    r.count("seed", cfg.seed);
    if (const Json* m = r.get("map")) {
        Reader mr(*m, "map", text);
        mr.real("gamma", cfg.gamma, unit_open, "in (0, 1)");
        mr.finish();
    }
    if (const Json* o = r.get("observable")) {
        try {
            cfg.observable = parse_observable(*o, text);
        } catch (const ValidationError& e) {
            r.fail("observable", e.what());
        }
    }
    if (const Json* c = r.get("calibration")) {
        Reader cr(*c, "calibration", text);
        auto& p = cfg.calibration;
        cr.count("centering_orbit_length", p.centering_orbit_length, 1);
        cr.count("centering_chains", p.centering_chains, 1);
        cr.count("burn_in", p.burn_in);
        cr.count("density_orbit_length", p.density_orbit_length, 1);
        cr.count("density_bins", p.density_bins, 2);
        cr.count("mu_Y_orbit_length", p.mu_Y_orbit_length, 1);
        cr.count("mu_Y_chains", p.mu_Y_chains, 1);
        cr.finish();
        if (p.density_bins % 2 != 0) cr.fail("calibration.density_bins", "must be even (1/2 is a bin edge)");
    }
    if (const Json* s = r.get("suites")) {
        Reader sr(*s, "suites", text);
        parse_suite(sr, "metric_checks", cfg.metric_checks, parse_metric);
        parse_suite(sr, "stable_consistency", cfg.stable_consistency, parse_stable);
        parse_suite(sr, "tail_exponent", cfg.tail_exponent, parse_tail);
        parse_suite(sr, "excursion_bound", cfg.excursion_bound, parse_bound);
        parse_suite(sr, "lap_sllns", cfg.lap_sllns, parse_lap);
        parse_suite(sr, "monotonicity", cfg.monotonicity, parse_mono);
        parse_suite(sr, "wip_marginal", cfg.wip_marginal, parse_wip);
        parse_suite(sr, "topology_probe", cfg.topology_probe, parse_topology);
        sr.finish();
    }
    if (const Json* d = r.get("paths_demo")) {
        Reader dr(*d, "paths_demo", text);
        auto& p = cfg.paths_demo;
        dr.count("n", p.n, 1);
        dr.real("T", p.T, positive, "positive");
        dr.count("burn_in", p.burn_in);
        if (const Json* y = dr.get("y0")) {
            if (!y->is_null()) {
                double v = 0.0;
                dr.real("y0", v, [](double x) { return x >= 0.5 && x <= 1.0; }, "in [1/2, 1]");
                p.y0 = v;
            }
        }
        dr.real("levy_grid_step", p.levy_grid_step, positive, "positive");
        dr.finish();
        const double cells = p.T / p.levy_grid_step;
        if (std::abs(cells - std::round(cells)) > 1e-9 * std::max(1.0, cells))
            dr.fail("paths_demo.levy_grid_step", "must divide T");
    }
    if (const Json* o = r.get("output")) {
        Reader orr(*o, "output", text);
        orr.boolean("plots", cfg.plots);
        orr.finish();
    }
    r.finish();
    if (cfg.needs_calibration() && !(cfg.gamma > 0.5 && cfg.gamma < 1.0))
        r.fail("map.gamma", "the statistical suites need gamma in (1/2, 1)");
    return cfg;
}

RunConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + file.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

Json to_json(const RunConfig& c) {
    Json j;
    j["seed"] = c.seed;
    j["map"] = {{"gamma", c.gamma}};
    j["observable"] = observable_json(c.observable);
    const auto& p = c.calibration;
    j["calibration"] = {{"centering_orbit_length", p.centering_orbit_length},
                        {"centering_chains", p.centering_chains},
                        {"burn_in", p.burn_in},
                        {"density_orbit_length", p.density_orbit_length},
                        {"density_bins", p.density_bins},
                        {"mu_Y_orbit_length", p.mu_Y_orbit_length},
                        {"mu_Y_chains", p.mu_Y_chains}};
    Json s = Json::object();
    if (c.metric_checks) s["metric_checks"] = metric_json(*c.metric_checks);
    if (c.stable_consistency) s["stable_consistency"] = stable_json(*c.stable_consistency);
    if (c.tail_exponent) s["tail_exponent"] = tail_json(*c.tail_exponent);
    if (c.excursion_bound) s["excursion_bound"] = bound_json(*c.excursion_bound);
    if (c.lap_sllns) s["lap_sllns"] = lap_json(*c.lap_sllns);
    if (c.monotonicity) s["monotonicity"] = mono_json(*c.monotonicity);
    if (c.wip_marginal) s["wip_marginal"] = wip_json(*c.wip_marginal);
    if (c.topology_probe) s["topology_probe"] = topology_json(*c.topology_probe);
    j["suites"] = std::move(s);
    Json d;
    d["n"] = c.paths_demo.n;
    d["T"] = c.paths_demo.T;
    d["burn_in"] = c.paths_demo.burn_in;
    d["y0"] = c.paths_demo.y0 ? Json(*c.paths_demo.y0) : Json();
    d["levy_grid_step"] = c.paths_demo.levy_grid_step;
    j["paths_demo"] = std::move(d);
    j["output"] = {{"plots", c.plots}};
    return j;
}

}  // namespace lsvwip::app
