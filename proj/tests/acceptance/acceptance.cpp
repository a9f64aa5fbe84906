// Acceptance criteria 1-13 at their default sizes. A single calibration (centering,
// invariant density, mu(Y)) is shared by every statistical criterion; each criterion
// is its own test case and prints the numbers it judged.

#include <gtest/gtest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <sys/wait.h>

#include "lsvwip/app/config.hpp"
#include "lsvwip/app/report.hpp"
#include "lsvwip/diagnostics.hpp"

using namespace lsvwip;
using namespace lsvwip::app;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

const RunConfig& defaults() {
    static const RunConfig cfg;
    return cfg;
}

std::uint64_t seed_for(SeedLabel label) { return suite_seed(defaults().seed, label); }

class Shared : public ::testing::Environment {
public:
    void SetUp() override {
        const auto t0 = Clock::now();
        calibration = calibrate(defaults().map(), defaults().observable, defaults().calibration,
                                seed_for(SeedLabel::Calibration));
        std::cout << "[calibration] " << seconds_since(t0) << " s\n" << calibration->to_json().dump(2) << '\n';
    }

    static inline std::optional<Calibration> calibration;
};

const Calibration& cal() { return *Shared::calibration; }

/// Each suite runs once; several criteria read from the same report.
const SuiteReport& suite(const std::string& name, const std::function<SuiteReport()>& run) {
    static std::map<std::string, SuiteReport> cache;
    static std::map<std::string, double> runtime;
    auto it = cache.find(name);
    if (it == cache.end()) {
        const auto t0 = Clock::now();
        it = cache.emplace(name, run()).first;
        runtime[name] = seconds_since(t0);
        std::cout << "[" << name << "] " << runtime[name] << " s\n" << it->second.to_json().dump(2) << '\n';
        it->second.metadata["acceptance_runtime_seconds"] = runtime[name];
    }
    return it->second;
}

const SuiteReport& lap() {
    return suite("lap_sllns", [] { return lap_sllns(cal(), LapParams{}, seed_for(SeedLabel::LapSllns)); });
}
const SuiteReport& tail() {
    return suite("tail_exponent",
                 [] { return tail_exponent_suite(cal(), TailParams{}, seed_for(SeedLabel::TailExponent)); });
}
const SuiteReport& stable() {
    return suite("stable_consistency", [] {
        return stable_consistency(cal(), StableCheckParams{}, seed_for(SeedLabel::StableConsistency));
    });
}
const SuiteReport& metrics() {
    return suite("metric_checks", [] { return metric_checks(MetricCheckParams{}, seed_for(SeedLabel::MetricChecks)); });
}
const SuiteReport& bound() {
    return suite("excursion_bound", [] {
        return excursion_bound_check(cal(), ExcursionBoundParams{}, seed_for(SeedLabel::ExcursionBound));
    });
}
const SuiteReport& mono() {
    return suite("monotonicity",
                 [] { return monotonicity_suite(cal(), MonotonicityParams{}, seed_for(SeedLabel::Monotonicity)); });
}
const SuiteReport& wip() {
    return suite("wip_marginal",
                 [] { return wip_marginal_suite(cal(), WipParams{}, seed_for(SeedLabel::WipMarginal)); });
}
const SuiteReport& topology() {
    return suite("topology_probe",
                 [] { return topology_probe(cal(), TopologyParams{}, seed_for(SeedLabel::TopologyProbe)); });
}

/// Asserts one metric passed, printing value, comparison and threshold.
void expect_metric(const SuiteReport& r, const std::string& name) {
    const MetricCheck* m = r.find(name);
    ASSERT_NE(m, nullptr) << r.suite_name << " has no metric " << name;
    std::cout << "  " << r.suite_name << "." << name << " = " << format_number(m->value) << ' '
              << to_string(m->comparison) << ' ' << format_number(m->threshold) << (m->pass ? "  ok" : "  FAIL")
              << '\n';
    EXPECT_TRUE(m->pass) << r.suite_name << "." << name << " = " << m->value << ' ' << to_string(m->comparison) << ' '
                         << m->threshold << " (" << m->description << ")";
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int shell(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Acceptance, Criterion01_KacFormula) {
    ASSERT_EQ(LapParams{}.kac_excursions, 1'000'000u);
    ASSERT_EQ(defaults().gamma, 0.6);
    expect_metric(lap(), "kac_deviation");
}

TEST(Acceptance, Criterion02_TailExponent) {
    expect_metric(tail(), "lsv_alpha_rel_error");
    expect_metric(tail(), "pareto_alpha_rel_error");
    expect_metric(tail(), "geometric_flagged");
}

TEST(Acceptance, Criterion03_StableLawConsistency) {
    expect_metric(stable(), "sampler_cdf_ks");
    expect_metric(stable(), "ecf_sup_error");
    expect_metric(stable(), "stability_ks");
}

TEST(Acceptance, Criterion04_GoldenMetricCase) {
    const StepPath g(1.0, 0.0, {0.5}, {1.0});
    const StepPath h(1.0, 0.0, {0.495, 0.505}, {0.5, 1.0});
    const auto t0 = Clock::now();
    const MetricResult j1 = j1_distance(g, h, 1e-6);
    const MetricResult m1 = m1_distance(g, h, 1e-6);
    const double elapsed = seconds_since(t0);
    std::cout << "  J1 [" << j1.lower << ", " << j1.upper << "], M1 [" << m1.lower << ", " << m1.upper << "], "
              << elapsed << " s\n";
    EXPECT_GE(j1.lower, 0.45);
    EXPECT_LE(m1.upper, 0.02);
    EXPECT_LE(j1.upper - j1.lower, 1e-6);
    EXPECT_LE(m1.upper - m1.lower, 1e-6);
    EXPECT_LT(elapsed, 1.0);
    expect_metric(metrics(), "golden_j1_lower");
    expect_metric(metrics(), "golden_m1_upper");
}

TEST(Acceptance, Criterion05_MetricAxiomsOnRandomPaths) {
    ASSERT_EQ(MetricCheckParams{}.trials, 500u);
    expect_metric(metrics(), "order_violations");
    expect_metric(metrics(), "symmetry_violations");
    expect_metric(metrics(), "triangle_violations");
    expect_metric(metrics(), "identity_violations");
}

TEST(Acceptance, Criterion06_ExcursionLemmaBound) {
    const SuiteReport& r = bound();
    // The literal right-hand side omits the excursion that straddles T; the
    // endpoint-corrected bound is reported alongside for diagnosis.
    if (const MetricCheck* c = r.find("endpoint_corrected_violations"))
        std::cout << "  endpoint_corrected_violations = " << c->value << "\n  min_margin = " << r.metadata["min_margin"]
                  << '\n';
    expect_metric(r, "lemma_violations");
    expect_metric(r, "rhs_median_trend");
}

TEST(Acceptance, Criterion07_PhiStarBound) {
    expect_metric(mono(), "phi_star_bound_violations");
    expect_metric(mono(), "excursions_checked");
}

TEST(Acceptance, Criterion08_MaxPhiStarCurveDecreases) { expect_metric(mono(), "phi_star_curve_trend"); }

TEST(Acceptance, Criterion09_WipMarginals) {
    ASSERT_EQ(WipParams{}.samples, 4000u);
    const SuiteReport& r = wip();
    expect_metric(r, "induced_ks_trend");
    expect_metric(r, "full_ks_trend");
    expect_metric(r, "induced_ks_final");
    const double runtime = r.metadata["acceptance_runtime_seconds"].get<double>();
    std::cout << "  runtime " << runtime << " s\n";
    EXPECT_LE(runtime, 600.0);
}

TEST(Acceptance, Criterion10_StrongDistributionalConvergence) { expect_metric(wip(), "strong_convergence_ks"); }

TEST(Acceptance, Criterion11_TopologyProbe) {
    expect_metric(topology(), "jump_bound_violations");
    expect_metric(topology(), "levy_max_jump_median_rel_change");
    expect_metric(topology(), "sup_ks_trend");
}

TEST(Acceptance, Criterion12_LapNumberSlln) {
    ASSERT_EQ(LapParams{}.k_grid, (std::vector<std::uint64_t>{1000, 10000, 100000}));
    expect_metric(lap(), "sup_error_trend");
}

TEST(Acceptance, Criterion13_Determinism) {
    const auto dir = std::filesystem::current_path() / "scratch" / "determinism";
    std::filesystem::remove_all(dir);
    const std::string config = std::string(LSVWIP_FIXTURES) + "/determinism.json";
    const std::string base = std::string(LSVWIP_CLI) + " run --seed 99 --config '" + config + "' --out '";
    ASSERT_LE(shell(base + (dir / "a").string() + "' > /dev/null 2>&1"), 1);
    ASSERT_LE(shell("OMP_NUM_THREADS=3 " + base + (dir / "b").string() + "' > /dev/null 2>&1"), 1);
    const std::string a = read_file(dir / "a" / "report.json");
    const std::string b = read_file(dir / "b" / "report.json");
    ASSERT_FALSE(a.empty());
    EXPECT_EQ(a, b) << "report.json differs between runs with the same seed";
    for (const char* csv : {"lap_sllns/sup_error.csv", "metric_checks/trials.csv", "calibration/density.csv"})
        EXPECT_EQ(read_file(dir / "a" / csv), read_file(dir / "b" / csv)) << csv;
}

int main(int argc, char** argv) {
    ::testing::InitGoogleTest(&argc, argv);
    ::testing::AddGlobalTestEnvironment(new Shared);
    return RUN_ALL_TESTS();
}
