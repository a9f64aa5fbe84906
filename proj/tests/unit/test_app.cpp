#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "lsvwip/app/commands.hpp"
#include "lsvwip/app/config.hpp"
#include "lsvwip/app/report.hpp"
#include "lsvwip/app/svg.hpp"
#include "lsvwip/io.hpp"
#include "test_util.hpp"

using namespace lsvwip;
using namespace lsvwip::app;

namespace {

std::string config_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::string cli() { return LSVWIP_CLI; }

std::string quiet(const std::filesystem::path& log) { return " > '" + log.string() + "' 2>&1"; }

}  // namespace

// ---------------------------------------------------------------------------
// Config schema

TEST(Config, DefaultsWhenEmpty) {
    const RunConfig c = parse_config("{}");
    EXPECT_EQ(c.gamma, 0.6);
    EXPECT_FALSE(c.needs_calibration());
    EXPECT_FALSE(c.metric_checks.has_value());
    EXPECT_TRUE(c.plots);
}

TEST(Config, UnknownKeyIsNamedWithLine) {
    const std::string msg = config_error(test::read_file(test::fixture("unknown_key.json")));
    EXPECT_NE(msg.find("map.gamm"), std::string::npos) << msg;
    EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
    EXPECT_NE(config_error(R"({"suites": {"lap_sllns": {"trails": 3}}})").find("suites.lap_sllns.trails"),
              std::string::npos);
    EXPECT_NE(config_error(R"({"sed": 1})").find("sed"), std::string::npos);
}

TEST(Config, TypeAndRangeErrors) {
    EXPECT_NE(config_error(R"({"seed": "x"})").find("seed"), std::string::npos);
    EXPECT_NE(config_error(R"({"seed": -1})").find("seed"), std::string::npos);
    EXPECT_NE(config_error(R"({"map": {"gamma": 1.5}})").find("map.gamma"), std::string::npos);
    EXPECT_NE(config_error(R"({"map": {"gamma": 0.3}, "suites": {"lap_sllns": {}}})").find("map.gamma"),
              std::string::npos);
    EXPECT_NE(config_error(R"({"suites": {"lap_sllns": {"k_grid": [100, 10]}}})").find("k_grid"), std::string::npos);
    EXPECT_NE(config_error(R"({"suites": {"tail_exponent": {"excursions": 1001, "chains": 10}}})").find("excursions"),
              std::string::npos);
    EXPECT_NE(config_error(R"({"calibration": {"density_bins": 101}})").find("density_bins"), std::string::npos);
    EXPECT_NE(config_error(R"({"paths_demo": {"T": 1, "levy_grid_step": 0.3}})").find("levy_grid_step"),
              std::string::npos);
    EXPECT_NE(config_error(R"({"observable": {"family": "cubic"}})").find("observable"), std::string::npos);
    EXPECT_NE(config_error("{\n  \"seed\": 1,\n  oops\n}").find("line 3"), std::string::npos);
}

TEST(Config, DisabledSuiteIsSkippedButStillValidated) {
    const RunConfig c = parse_config(R"({"suites": {"metric_checks": {"enabled": false, "trials": 5}}})");
    EXPECT_FALSE(c.metric_checks.has_value());
    EXPECT_FALSE(config_error(R"({"suites": {"metric_checks": {"enabled": false, "trails": 5}}})").empty());
}

TEST(Config, ObservableFamilies) {
    const RunConfig c = parse_config(R"({"observable": {"family": "power", "a": 1, "b": -2, "eta": 0.5,
        "indicators": [{"left": 0.75, "right": "inf", "weight": 0.25}]}})");
    EXPECT_EQ(c.observable.family(), ObservableFamily::Power);
    ASSERT_EQ(c.observable.indicators().size(), 1u);
    EXPECT_TRUE(std::isinf(c.observable.indicators()[0].right));
    EXPECT_DOUBLE_EQ(c.observable.raw(1.0), 1.0 - 2.0 + 0.25);
}

TEST(Config, ResolvedJsonRoundTrips) {
    const RunConfig c = load_config(test::fixture("determinism.json"));
    const Json j = to_json(c);
    const RunConfig back = parse_config(j.dump());
    EXPECT_EQ(to_json(back), j);
    // Thresholds are spelled out in the resolved config.
    EXPECT_EQ(j["suites"]["lap_sllns"]["kac_tolerance"], 0.02);
    EXPECT_EQ(j["suites"]["metric_checks"]["j1_lower_min"], 0.45);
}

TEST(Config, DefaultExampleConfigParses) {
    const auto file = std::filesystem::path(LSVWIP_FIXTURES).parent_path().parent_path() / "configs" / "default.json";
    const RunConfig c = load_config(file);
    EXPECT_TRUE(c.metric_checks && c.stable_consistency && c.tail_exponent && c.excursion_bound && c.lap_sllns &&
                c.monotonicity && c.wip_marginal && c.topology_probe);
}

// ---------------------------------------------------------------------------
// Reports and SVG

TEST(Report, SuiteSeedsAreStableAndDistinct) {
    EXPECT_EQ(suite_seed(1, SeedLabel::LapSllns), derive_seed(1, 5));
    EXPECT_NE(suite_seed(1, SeedLabel::LapSllns), suite_seed(1, SeedLabel::Monotonicity));
}

TEST(Report, MetricsTableEchoesThresholds) {
    SuiteReport r;
    r.suite_name = "x";
    r.check("m", 0.5, Comparison::Less, 0.08, "d");
    const Table t = metrics_table(r);
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.columns, (std::vector<std::string>{"name", "value", "comparison", "threshold", "pass", "description"}));
    EXPECT_EQ(t.rows[0][3], "0.080000000000000002");
}

TEST(Svg, WellFormedWithEscaping) {
    Plot p;
    p.title = "a < b & \"c\"";
    p.log_x = true;
    p.series.push_back({"s<1>", {1.0, 10.0, 100.0, -1.0}, {0.1, NAN, 0.3, 0.2}, true, true, false});
    p.series.push_back({"empty", {}, {}, false, false, true});
    p.bands.push_back({1.0, 5.0});
    const auto dir = test::scratch_dir("svg");
    write_text_file(dir / "p.svg", render_svg(p));
    EXPECT_TRUE(test::well_formed_xml(dir / "p.svg"));
    EXPECT_EQ(xml_escape("<&>\"'"), "&lt;&amp;&gt;&quot;&apos;");
}

// ---------------------------------------------------------------------------
// Commands

TEST(MetricCommand, GoldenFixtures) {
    std::ostringstream out;
    std::ostringstream err;
    ASSERT_EQ(metric_command(test::fixture("unit_jump.csv"), test::fixture("two_half_jumps.csv"), "J1", 1e-6, out, err),
              kExitOk)
        << err.str();
    const Json j1 = Json::parse(out.str());
    EXPECT_GE(j1["lower"].get<double>(), 0.45);
    EXPECT_EQ(j1["tolerance"], 1e-6);
    std::ostringstream out2;
    ASSERT_EQ(metric_command(test::fixture("unit_jump.csv"), test::fixture("two_half_jumps.csv"), "M1", 1e-6, out2, err),
              kExitOk);
    EXPECT_LE(Json::parse(out2.str())["upper"].get<double>(), 0.02);
}

TEST(MetricCommand, InvalidInputsExitTwo) {
    std::ostringstream out;
    std::ostringstream err;
    EXPECT_EQ(metric_command(test::fixture("unit_jump.csv"), test::fixture("horizon_two.csv"), "M1", 1e-6, out, err),
              kExitInvalid);
    EXPECT_NE(err.str().find("horizon"), std::string::npos) << err.str();
    EXPECT_EQ(metric_command(test::fixture("unit_jump.csv"), test::fixture("malformed.csv"), "M1", 1e-6, out, err),
              kExitInvalid);
    EXPECT_NE(err.str().find("malformed.csv"), std::string::npos);
    EXPECT_EQ(metric_command(test::fixture("unit_jump.csv"), test::fixture("unit_jump.csv"), "L2", 1e-6, out, err),
              kExitInvalid);
    EXPECT_EQ(metric_command(test::fixture("unit_jump.csv"), test::fixture("unit_jump.csv"), "J1", 0.0, out, err),
              kExitInvalid);
    EXPECT_EQ(metric_command(test::fixture("unit_jump.csv"), test::fixture("nope.csv"), "J1", 1e-6, out, err),
              kExitInvalid);
}

TEST(RunCommand, MinimalLapConfigWritesSupErrorCsv) {
    const auto dir = test::scratch_dir("run_lap");
    CommonOptions o;
    o.config = test::fixture("minimal_lap.json");
    o.out = dir;
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_command(o, out, err);
    EXPECT_EQ(code, kExitOk) << out.str() << err.str();
    const std::string csv = test::read_file(dir / "lap_sllns" / "sup_error.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "k,median,q25,q75");
    EXPECT_EQ(csv.find('\r'), std::string::npos);
    EXPECT_TRUE(std::filesystem::exists(dir / "lap_sllns" / "metrics.csv"));
    EXPECT_FALSE(std::filesystem::exists(dir / "lap_sllns" / "sup_error_vs_k.svg"));  // plots off
    const std::string density = test::read_file(dir / "calibration" / "density.csv");
    EXPECT_EQ(density.substr(0, density.find('\n')), "bin_left,bin_right,mass");
    const std::string partition = test::read_file(dir / "calibration" / "partition.csv");
    EXPECT_EQ(partition.substr(0, partition.find('\n')), "n,left,right,measure_estimate");

    const Json report = Json::parse(test::read_file(dir / "report.json"));
    EXPECT_EQ(report["seed"], 11);
    EXPECT_EQ(report["suites"].size(), 1u);
    EXPECT_EQ(report["config"]["suites"]["lap_sllns"]["kac_tolerance"], 0.02);
    bool saw_threshold = false;
    for (const auto& m : report["suites"][0]["metrics"])
        if (m["name"] == "kac_deviation") saw_threshold = m["threshold"] == 0.02;
    EXPECT_TRUE(saw_threshold);
}

TEST(RunCommand, NoSuitesIsAConfigError) {
    const auto dir = test::scratch_dir("run_empty");
    test::write_file(dir / "c.json", "{}");
    CommonOptions o;
    o.config = dir / "c.json";
    o.out = dir / "out";
    std::ostringstream out;
    std::ostringstream err;
    EXPECT_EQ(run_command(o, out, err), kExitInvalid);
    EXPECT_NE(err.str().find("suites"), std::string::npos);
}

TEST(PathsDemo, InvariantsOfTheWrittenPaths) {
    const auto dir = test::scratch_dir("paths_demo");
    CommonOptions o;
    o.config = test::fixture("demo.json");
    o.out = dir;
    std::ostringstream out;
    std::ostringstream err;
    ASSERT_EQ(paths_demo_command(o, out, err), kExitOk) << err.str();
    const StepPath W = load_step_path_csv(dir / "W_n.csv");
    const StepPath U = load_step_path_csv(dir / "U_n.csv");
    const double n = 300.0;
    // W_n jumps only on the 1/n grid.
    for (double b : W.breakpoints()) EXPECT_NEAR(b * n, std::round(b * n), 1e-9) << b;
    // U_n is constant between consecutive excursion starts t_{n,j}; its breakpoints
    // are those starts, where it agrees with W_n.
    std::vector<double> starts;
    {
        std::istringstream ex(test::read_file(dir / "excursions.csv"));
        std::string line;
        std::getline(ex, line);
        EXPECT_EQ(line, "y,r,Phi,PhiStar,direction");
        double t = 0.0;
        while (std::getline(ex, line)) {
            starts.push_back(t / n);
            const auto c1 = line.find(',');
            const auto c2 = line.find(',', c1 + 1);
            t += std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        }
    }
    for (double b : U.breakpoints()) {
        bool on_start = false;
        for (double s : starts) on_start = on_start || std::abs(s - b) < 1e-12;
        EXPECT_TRUE(on_start) << b;
        EXPECT_NEAR(U(b), W(b), 1e-12);
    }
    for (std::size_t j = 0; j + 1 < starts.size() && starts[j + 1] <= 1.0; ++j) {
        const double mid = 0.5 * (starts[j] + starts[j + 1]);
        EXPECT_EQ(U(mid), U(starts[j]));
    }
    EXPECT_TRUE(test::well_formed_xml(dir / "paths.svg"));
    EXPECT_TRUE(test::well_formed_xml(dir / "levy.svg"));
    const Json demo = Json::parse(test::read_file(dir / "demo.json"));
    EXPECT_LE(demo["m1_W_U"]["lower"].get<double>(), demo["j1_W_U"]["upper"].get<double>() + 2e-6);
}

// ---------------------------------------------------------------------------
// CLI exit codes

TEST(Cli, ExitCodes) {
    const auto dir = test::scratch_dir("cli");
    const auto log = dir / "log.txt";
    EXPECT_EQ(test::run_shell(cli() + " run --config '" + test::fixture("unknown_key.json").string() + "' --out '" +
                              (dir / "o").string() + "'" + quiet(log)),
              2);
    EXPECT_NE(test::read_file(log).find("gamm"), std::string::npos) << test::read_file(log);
    EXPECT_EQ(test::run_shell(cli() + " run --config /nonexistent.json" + quiet(log)), 2);
    EXPECT_EQ(test::run_shell(cli() + " frobnicate" + quiet(log)), 2);
    EXPECT_EQ(test::run_shell(cli() + " metric '" + test::fixture("unit_jump.csv").string() + "' '" +
                              test::fixture("horizon_two.csv").string() + "'" + quiet(log)),
              2);
    EXPECT_EQ(test::run_shell(cli() + " metric '" + test::fixture("unit_jump.csv").string() + "' '" +
                              test::fixture("malformed.csv").string() + "'" + quiet(log)),
              2);
    EXPECT_EQ(test::run_shell(cli() + " metric --metric J1 '" + test::fixture("unit_jump.csv").string() + "' '" +
                              test::fixture("two_half_jumps.csv").string() + "'" + quiet(log)),
              0);
    EXPECT_GE(Json::parse(test::read_file(log))["lower"].get<double>(), 0.45);

    // A suite that cannot meet its threshold makes the run exit 1.
    test::write_file(dir / "strict.json", R"({"suites": {"metric_checks": {"trials": 5, "j1_lower_min": 0.9}}})");
    EXPECT_EQ(test::run_shell(cli() + " run --no-plot --config '" + (dir / "strict.json").string() + "' --out '" +
                              (dir / "strict").string() + "'" + quiet(log)),
              1);
    test::write_file(dir / "ok.json", R"({"suites": {"metric_checks": {"trials": 5}}})");
    EXPECT_EQ(test::run_shell(cli() + " run --seed 3 --config '" + (dir / "ok.json").string() + "' --out '" +
                              (dir / "ok").string() + "'" + quiet(log)),
              0);
    EXPECT_EQ(Json::parse(test::read_file(dir / "ok" / "report.json"))["seed"], 3);
}
