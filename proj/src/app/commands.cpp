#include "lsvwip/app/commands.hpp"

#include <functional>
#include <iostream>
#include <sstream>

#include "lsvwip/app/config.hpp"
#include "lsvwip/app/report.hpp"
#include "lsvwip/app/svg.hpp"
#include "lsvwip/io.hpp"
#include "lsvwip/parallel.hpp"

namespace lsvwip::app {

namespace {

// Maps exceptions to exit statuses; invalid input is 2, everything else 1.
int report_exception(std::ostream& err) {
    try {
        throw;
    } catch (const ConfigError& e) {
        err << e.what() << '\n';
        return kExitInvalid;
    } catch (const ValidationError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const HypothesisError& e) {
        err << "hypothesis not met: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

RunConfig resolve(const CommonOptions& options) {
    RunConfig cfg = load_config(options.config);
    if (options.seed) cfg.seed = *options.seed;
    if (options.no_plot) cfg.plots = false;
    return cfg;
}

Calibration run_calibration(const RunConfig& cfg) {
    return calibrate(cfg.map(), cfg.observable, cfg.calibration, suite_seed(cfg.seed, SeedLabel::Calibration));
}

Series step_series(const std::string& label, const StepPath& g) {
    Series s{label, {g.domain_start()}, {g.initial_value()}, true, false, false};
    for (std::size_t i = 0; i < g.breakpoints().size(); ++i) {
        s.x.push_back(g.breakpoints()[i]);
        s.y.push_back(g.values()[i]);
    }
    if (s.x.back() < g.domain_end()) {
        s.x.push_back(g.domain_end());
        s.y.push_back(g.final_value());
    }
    return s;
}

// Cells {r = n} of the return partition listed in partition.csv.
constexpr std::uint64_t kPartitionCells = 200;

void write_calibration_artifacts(const std::filesystem::path& dir, const MapSpec& spec, const Calibration& cal) {
    std::ostringstream density;
    write_density_csv(density, cal.density);
    write_text_file(dir / "density.csv", density.str());
    std::ostringstream partition;
    write_partition_csv(partition, return_partition(spec, kPartitionCells, &cal.density));
    write_text_file(dir / "partition.csv", partition.str());
}

}  // namespace

int run_command(const CommonOptions& options, std::ostream& out, std::ostream& err) {
    try {
        const RunConfig cfg = resolve(options);
        std::optional<Calibration> cal;
        if (cfg.needs_calibration()) {
            out << "calibrating (centering, invariant density, mu(Y)) ..." << std::endl;
            cal = run_calibration(cfg);
        }

        using Job = std::function<SuiteReport()>;
        std::vector<Job> jobs;
        const auto s = [&](SeedLabel l) { return suite_seed(cfg.seed, l); };
        if (cfg.metric_checks) jobs.push_back([&] { return metric_checks(*cfg.metric_checks, s(SeedLabel::MetricChecks)); });
        if (cfg.stable_consistency)
            jobs.push_back([&] { return stable_consistency(*cal, *cfg.stable_consistency, s(SeedLabel::StableConsistency)); });
        if (cfg.tail_exponent)
            jobs.push_back([&] { return tail_exponent_suite(*cal, *cfg.tail_exponent, s(SeedLabel::TailExponent)); });
        if (cfg.excursion_bound)
            jobs.push_back([&] { return excursion_bound_check(*cal, *cfg.excursion_bound, s(SeedLabel::ExcursionBound)); });
        if (cfg.lap_sllns) jobs.push_back([&] { return lap_sllns(*cal, *cfg.lap_sllns, s(SeedLabel::LapSllns)); });
        if (cfg.monotonicity)
            jobs.push_back([&] { return monotonicity_suite(*cal, *cfg.monotonicity, s(SeedLabel::Monotonicity)); });
        if (cfg.wip_marginal)
            jobs.push_back([&] { return wip_marginal_suite(*cal, *cfg.wip_marginal, s(SeedLabel::WipMarginal)); });
        if (cfg.topology_probe)
            jobs.push_back([&] { return topology_probe(*cal, *cfg.topology_probe, s(SeedLabel::TopologyProbe)); });
        if (jobs.empty()) throw ConfigError("config error at 'suites': no suite is enabled");

        // Suite-level fan-out; kernels inside a suite then run serially, and every
        // result is independent of the schedule.
        std::vector<SuiteReport> reports(jobs.size());
        for_each_task(Exec::Parallel, jobs.size(), [&](std::uint64_t i) { reports[i] = jobs[i](); });

        if (cal) write_calibration_artifacts(options.out / "calibration", cfg.map(), *cal);
        for (const auto& r : reports) write_suite_artifacts(options.out, r, cfg.plots);
        write_text_file(options.out / "report.json", dump_json(build_report(cfg, cal, reports)));

        bool passed = true;
        for (const auto& r : reports) {
            out << (r.passed() ? "PASS " : "FAIL ") << r.suite_name << '\n';
            for (const auto& m : r.metrics)
                out << "  " << (m.pass ? "ok   " : "FAIL ") << m.name << " = " << format_number(m.value) << ' '
                    << to_string(m.comparison) << ' ' << format_number(m.threshold) << '\n';
            passed = passed && r.passed();
        }
        out << "report: " << (options.out / "report.json").string() << '\n';
        return passed ? kExitOk : kExitFailure;
    } catch (...) {
        return report_exception(err);
    }
}

int paths_demo_command(const CommonOptions& options, std::ostream& out, std::ostream& err) {
    try {
        const RunConfig cfg = resolve(options);
        const auto& demo = cfg.paths_demo;
        const MapSpec spec = cfg.map();
        const Calibration cal = run_calibration(cfg);
        if (!cal.full_law)
            throw HypothesisError("paths-demo: the Levy path needs phi(0) != 0 and gamma in (1/2, 1)");

        Rng rng = Rng::for_task(suite_seed(cfg.seed, SeedLabel::PathsDemo), Stream::Demo, 0);
        const double y0 = demo.y0 ? *demo.y0 : sample_inducing_start(spec, DensitySpec::uniform(), demo.burn_in, rng);
        const ScaledPathBundle b = scaled_paths(spec, cal.observable, y0, demo.n, demo.T);
        const StepPath levy = sample_levy_path(*cal.full_law, {demo.T, demo.levy_grid_step}, rng);

        save_step_path_csv(options.out / "W_n.csv", b.W_n);
        save_step_path_csv(options.out / "U_n.csv", b.U_n);
        save_step_path_csv(options.out / "P_n.csv", b.P_n);
        save_step_path_csv(options.out / "levy.csv", levy);
        std::ostringstream ex;
        write_excursions_csv(ex, b.excursions);
        write_text_file(options.out / "excursions.csv", ex.str());

        Json meta;
        meta["seed"] = cfg.seed;
        meta["y0"] = y0;
        meta["n"] = demo.n;
        meta["T"] = demo.T;
        meta["B_n"] = b.B_n;
        meta["excursions_started"] = b.excursion_starts.size();
        meta["m1_W_U"] = to_json(m1_distance(b.W_n, b.U_n));
        meta["j1_W_U"] = to_json(j1_distance(b.W_n, b.U_n));
        meta["config"] = to_json(cfg);
        meta["calibration"] = cal.to_json();
        write_text_file(options.out / "demo.json", dump_json(meta));

        if (cfg.plots) {
            Plot p;
            p.title = "W_n and U_n (n = " + std::to_string(demo.n) + "), excursion intervals shaded";
            p.x_label = "t";
            p.y_label = "scaled sum";
            p.series.push_back(step_series("W_n", b.W_n));
            p.series.push_back(step_series("U_n", b.U_n));
            for (std::size_t j = 0; j < b.excursion_starts.size(); ++j) {
                const double t1 = j + 1 < b.excursion_starts.size() ? b.excursion_starts[j + 1] : demo.T;
                p.bands.push_back({b.excursion_starts[j], std::min(t1, demo.T)});
            }
            write_text_file(options.out / "paths.svg", render_svg(p));
            Plot l;
            l.title = "Sampled Levy path of the limit law";
            l.x_label = "t";
            l.y_label = "W(t)";
            l.series.push_back(step_series("Levy", levy));
            write_text_file(options.out / "levy.svg", render_svg(l));
        }
        out << "paths-demo: y0 = " << format_number(y0) << ", " << b.excursion_starts.size()
            << " excursions; outputs in " << options.out.string() << '\n';
        return kExitOk;
    } catch (...) {
        return report_exception(err);
    }
}

int metric_command(const std::filesystem::path& first, const std::filesystem::path& second,
                   const std::string& metric_tag, double tolerance, std::ostream& out, std::ostream& err) {
    try {
        const MetricKind kind = parse_metric_kind(metric_tag);
        if (!(tolerance > 0.0)) throw ValidationError("tolerance must be positive");
        StepPath a;
        StepPath b;
        try {
            a = load_step_path_csv(first);
        } catch (const ValidationError& e) {
            throw ValidationError(first.string() + ": " + e.what());
        }
        try {
            b = load_step_path_csv(second);
        } catch (const ValidationError& e) {
            throw ValidationError(second.string() + ": " + e.what());
        }
        if (a.domain_end() != b.domain_end())
            throw ValidationError("paths have different horizons T (" + format_number(a.domain_end()) + " vs " +
                                  format_number(b.domain_end()) + ")");
        out << dump_json(to_json(distance(kind, a, b, tolerance)));
        return kExitOk;
    } catch (...) {
        return report_exception(err);
    }
}

}  // namespace lsvwip::app
