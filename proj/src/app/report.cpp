#include "lsvwip/app/report.hpp"

#include <cmath>

#include "lsvwip/io.hpp"

#ifndef LSVWIP_VERSION
#define LSVWIP_VERSION "unknown"
#endif

namespace lsvwip::app {

namespace {

std::size_t column(const Table& t, const std::string& name) {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        if (t.columns[i] == name) return i;
    throw ValidationError("table '" + t.name + "' has no column '" + name + "'");
}

std::vector<double> numbers(const Table& t, const std::string& name) {
    const std::size_t c = column(t, name);
    std::vector<double> out;
    for (const auto& row : t.rows) out.push_back(std::stod(row[c]));
    return out;
}

const Table* find_table(const SuiteReport& r, const std::string& name) {
    for (const auto& t : r.tables)
        if (t.name == name) return &t;
    return nullptr;
}

Plot curve_plot(const Table& t, const std::string& x, const std::vector<std::string>& ys, const std::string& title,
                const std::string& y_label, bool log_x, bool log_y) {
    Plot p;
    p.title = title;
    p.x_label = x;
    p.y_label = y_label;
    p.log_x = log_x;
    p.log_y = log_y;
    const auto xv = numbers(t, x);
    for (const auto& y : ys) p.series.push_back({y, xv, numbers(t, y), false, true, false});
    return p;
}

}  // namespace

std::uint64_t suite_seed(std::uint64_t master, SeedLabel label) {
    return derive_seed(master, static_cast<std::uint64_t>(label));
}

Table metrics_table(const SuiteReport& report) {
    Table t{"metrics", {"name", "value", "comparison", "threshold", "pass", "description"}, {}};
    for (const auto& m : report.metrics)
        t.add_row({m.name, format_number(m.value), to_string(m.comparison), format_number(m.threshold),
                   m.pass ? "true" : "false", m.description});
    return t;
}

std::vector<std::pair<std::string, Plot>> suite_plots(const SuiteReport& r) {
    std::vector<std::pair<std::string, Plot>> out;
    const std::string& s = r.suite_name;
    if (s == "wip_marginal") {
        if (const Table* t = find_table(r, "ks_by_n"))
            out.emplace_back("ks_vs_n", curve_plot(*t, "n", {"induced_ks", "full_ks", "strong_two_sample_ks"},
                                                   "KS distance to the stable limit", "KS", true, true));
    } else if (s == "lap_sllns") {
        if (const Table* t = find_table(r, "sup_error"))
            out.emplace_back("sup_error_vs_k",
                             curve_plot(*t, "k", {"median", "q25", "q75"}, "Lap-number sup error", "error", true, true));
    } else if (s == "tail_exponent") {
        if (const Table* t = find_table(r, "tail_fit")) {
            Plot p = curve_plot(*t, "n", {"empirical_tail"}, "Return-time tail P(r > n)", "P(r > n)", true, true);
            const auto& x = p.series[0].x;
            const auto& y = p.series[0].y;
            const double a = r.metadata.at("lsv").at("alpha_hat").get<double>();
            const double e = r.metadata.at("expected_alpha").get<double>();
            Series fit{"fit slope -alpha_hat", {}, {}, false, false, true};
            Series ref{"slope -1/gamma", {}, {}, false, false, true};
            for (double n : x) {
                fit.x.push_back(n);
                fit.y.push_back(y.front() * std::pow(n / x.front(), -a));
                ref.x.push_back(n);
                ref.y.push_back(y.front() * std::pow(n / x.front(), -e));
            }
            p.series.push_back(std::move(fit));
            p.series.push_back(std::move(ref));
            out.emplace_back("tail_loglog", std::move(p));
        }
    } else if (s == "monotonicity") {
        if (const Table* t = find_table(r, "phi_star_curve"))
            out.emplace_back("phi_star_vs_n", curve_plot(*t, "n", {"median", "q25", "q75"},
                                                         "B(n)^-1 max Phi* along the induced orbit", "value", true, true));
    } else if (s == "excursion_bound") {
        if (const Table* t = find_table(r, "rhs_by_n"))
            out.emplace_back("rhs_vs_n", curve_plot(*t, "n", {"median_rhs", "q25", "q75"},
                                                    "Excursion-bound right-hand side", "rhs", true, true));
    } else if (s == "topology_probe") {
        if (const Table* t = find_table(r, "by_n"))
            out.emplace_back("topology_vs_n", curve_plot(*t, "n", {"sup_two_sample_ks", "levy_max_jump_median"},
                                                         "Sup functional and Levy max jump", "value", true, false));
    } else if (s == "stable_consistency") {
        if (const Table* t = find_table(r, "ecf"))
            out.emplace_back("ecf_error", curve_plot(*t, "t", {"abs_error"}, "Empirical vs exact characteristic function",
                                                     "|ECF - CF|", false, false));
    }
    return out;
}

void write_suite_artifacts(const std::filesystem::path& dir, const SuiteReport& report, bool plots) {
    const auto sub = dir / report.suite_name;
    save_table_csv(sub / "metrics.csv", metrics_table(report));
    for (const auto& t : report.tables) save_table_csv(sub / (t.name + ".csv"), t);
    if (plots)
        for (const auto& [name, plot] : suite_plots(report)) write_text_file(sub / (name + ".svg"), render_svg(plot));
}

Json build_report(const RunConfig& config, const std::optional<Calibration>& calibration,
                  const std::vector<SuiteReport>& suites) {
    Json j;
    j["tool"] = "lsvwip";
    j["version"] = LSVWIP_VERSION;
    j["seed"] = config.seed;
    j["config"] = to_json(config);
    j["calibration"] = calibration ? calibration->to_json() : Json();
    bool passed = true;
    Json s = Json::array();
    for (const auto& r : suites) {
        passed = passed && r.passed();
        s.push_back(r.to_json());
    }
    j["passed"] = passed;
    j["suites"] = std::move(s);
    return j;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace lsvwip::app
