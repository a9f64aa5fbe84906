#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lsvwip/app/commands.hpp"

int main(int argc, char** argv) {
    using namespace lsvwip::app;
    CLI::App app{"lsvwip: weak invariance principles for LSV intermittent maps"};
    app.set_version_flag("--version", std::string(LSVWIP_VERSION));
    app.require_subcommand(1);

    CommonOptions run_opts;
    std::uint64_t run_seed = 0;
    auto* run = app.add_subcommand("run", "Run the configured verification suites");
    run->add_option("--config", run_opts.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", run_opts.out, "Output directory")->capture_default_str();
    auto* run_seed_opt = run->add_option("--seed", run_seed, "Master seed (overrides the config)");
    run->add_flag("--no-plot", run_opts.no_plot, "Skip SVG output");

    CommonOptions demo_opts;
    std::uint64_t demo_seed = 0;
    auto* demo = app.add_subcommand("paths-demo", "Emit W_n, U_n, P_n and a Levy path for one orbit");
    demo->add_option("--config", demo_opts.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    demo->add_option("--out", demo_opts.out, "Output directory")->capture_default_str();
    auto* demo_seed_opt = demo->add_option("--seed", demo_seed, "Master seed (overrides the config)");
    demo->add_flag("--no-plot", demo_opts.no_plot, "Skip SVG output");

    std::string first;
    std::string second;
    std::string tag = "M1";
    double tol = 1e-6;
    auto* metric = app.add_subcommand("metric", "Certified J1/M1 distance bracket between two StepPath CSVs");
    metric->add_option("first", first, "First path CSV")->required();
    metric->add_option("second", second, "Second path CSV")->required();
    metric->add_option("--metric,-m", tag, "J1 or M1")->capture_default_str();
    metric->add_option("--tol", tol, "Bracket width")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    if (*run) {
        if (*run_seed_opt) run_opts.seed = run_seed;
        return run_command(run_opts, std::cout, std::cerr);
    }
    if (*demo) {
        if (*demo_seed_opt) demo_opts.seed = demo_seed;
        return paths_demo_command(demo_opts, std::cout, std::cerr);
    }
    return metric_command(first, second, tag, tol, std::cout, std::cerr);
}
