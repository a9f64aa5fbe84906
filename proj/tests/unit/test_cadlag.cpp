#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "lsvwip/cadlag.hpp"
#include "lsvwip/diagnostics.hpp"

using namespace lsvwip;

namespace {

constexpr double kTol = 1e-6;

void expect_bracket(const MetricResult& r, double exact, double tol = kTol) {
    EXPECT_LE(r.lower, exact + 1e-12);
    EXPECT_GE(r.upper, exact - 1e-12);
    EXPECT_LE(r.upper - r.lower, tol + 1e-15);
}

StepPath unit_jump(double at, double height = 1.0) { return StepPath(1.0, 0.0, {at}, {height}); }

}  // namespace

TEST(StepPath, Evaluation) {
    const StepPath g(2.0, 1.0, {0.5, 1.0, 2.0}, {3.0, -1.0, 4.0});
    EXPECT_EQ(g(0.0), 1.0);
    EXPECT_EQ(g(0.49), 1.0);
    EXPECT_EQ(g(0.5), 3.0);
    EXPECT_EQ(g.left_limit(0.5), 1.0);
    EXPECT_EQ(g(1.5), -1.0);
    EXPECT_EQ(g(2.0), 4.0);
    EXPECT_EQ(g.left_limit(2.0), -1.0);
    EXPECT_EQ(g.final_value(), 4.0);
    EXPECT_EQ(g.jump_count(), 3u);
}

TEST(StepPath, Validation) {
    EXPECT_THROW(StepPath(1.0, 0.0, {0.0}, {1.0}), ValidationError);       // breakpoint at start
    EXPECT_THROW(StepPath(1.0, 0.0, {1.5}, {1.0}), ValidationError);       // beyond T
    EXPECT_THROW(StepPath(1.0, 0.0, {0.5, 0.5}, {1.0, 2.0}), ValidationError);
    EXPECT_THROW(StepPath(1.0, 0.0, {0.5}, {}), ValidationError);
    EXPECT_THROW(StepPath(1.0, NAN, {}, {}), ValidationError);
}

TEST(StepPath, SimplifiedDropsSilentBreakpoints) {
    const StepPath g(1.0, 0.0, {0.2, 0.4, 0.6}, {0.0, 1.0, 1.0});
    EXPECT_EQ(g.jump_count(), 1u);
    const StepPath s = g.simplified();
    ASSERT_EQ(s.breakpoints().size(), 1u);
    EXPECT_EQ(s.breakpoints()[0], 0.4);
    for (double t = 0.0; t <= 1.0; t += 0.05) ASSERT_EQ(s(t), g(t));
}

TEST(CompletedGraph, VerticesInGraphOrder) {
    const auto cg = completed_graph(StepPath(1.0, 0.0, {0.5, 0.51}, {0.5, 1.0}));
    const std::vector<GraphVertex> expected{{0.0, 0.0}, {0.5, 0.0}, {0.5, 0.5}, {0.51, 0.5}, {0.51, 1.0}, {1.0, 1.0}};
    EXPECT_EQ(cg.vertices, expected);
}

TEST(Metrics, GoldenDiscriminator) {
    const auto start = std::chrono::steady_clock::now();
    const StepPath a = unit_jump(0.5);
    const StepPath b(1.0, 0.0, {0.5, 0.51}, {0.5, 1.0});
    const auto j1 = j1_distance(a, b, kTol);
    const auto m1 = m1_distance(a, b, kTol);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    expect_bracket(j1, 0.5);
    expect_bracket(m1, 0.01);
    EXPECT_GE(j1.lower, 0.45);
    EXPECT_LE(m1.upper, 0.02);
    EXPECT_LT(secs, 1.0);
}

TEST(Metrics, ShiftedJumpOracle) {
    const StepPath a = unit_jump(0.5);
    const StepPath b = unit_jump(0.6);
    EXPECT_DOUBLE_EQ(uniform_distance(a, b), 1.0);
    expect_bracket(j1_distance(a, b), 0.1);
    expect_bracket(m1_distance(a, b), 0.1);
}

TEST(Metrics, DifferentHeightsAndTimesOracle) {
    // Matching the two jumps costs max(|time shift|, |height difference|).
    const StepPath a = unit_jump(0.3, 1.0);
    const StepPath b = unit_jump(0.45, 0.9);
    expect_bracket(j1_distance(a, b), 0.15);
    expect_bracket(m1_distance(a, b), 0.15);
}

TEST(Metrics, ConstantPaths) {
    const StepPath a = StepPath::constant(1.0, 0.25);
    const StepPath b = StepPath::constant(1.0, -0.5);
    expect_bracket(j1_distance(a, b), 0.75);
    expect_bracket(m1_distance(a, b), 0.75);
    EXPECT_THROW(j1_distance(a, StepPath::constant(2.0, 0.0)), ValidationError);
}

TEST(Metrics, JumpAtHorizonCannotMove) {
    // lambda(T) = T: a jump at T can only be matched by a jump at T. Regression
    // case for a pair on which the J1 decision procedure used to be asymmetric.
    const StepPath a(1.0, -0.27331471687807674, {0.29503045631404951}, {0.35914977228967682});
    const StepPath b(1.0, -0.87148364204057316,
                     {0.01348076715194485, 0.047850939940899562, 0.29999999999999999, 0.55000000000000004,
                      0.82610538481344142, 1.0},
                     {-0.74442483865731024, -0.84451026378772465, -0.10023579039173058, -0.66558794887166273,
                      -0.39437373697017342, -0.27529408533292399});
    const auto ab = j1_distance(a, b);
    const auto ba = j1_distance(b, a);
    EXPECT_NEAR(ab.upper, ba.upper, 2 * kTol);
    // a's jump must move past 0.826, leaving the level pair (0.359, -0.394) on [tau, 1).
    expect_bracket(ab, 0.35914977228967682 + 0.39437373697017342);

    const StepPath c = unit_jump(1.0);
    const StepPath d = unit_jump(0.95);
    expect_bracket(j1_distance(c, d), 1.0);  // the jump at T cannot be shifted onto 0.95
    expect_bracket(m1_distance(c, d), 0.05);
}

TEST(Metrics, SelfDistanceIsZero) {
    Rng rng(1);
    for (int i = 0; i < 100; ++i) {
        const StepPath g = random_step_path(rng, 1.0, 8);
        ASSERT_EQ(j1_distance(g, g).lower, 0.0);
        ASSERT_EQ(m1_distance(g, g).lower, 0.0);
        ASSERT_LE(j1_distance(g, g).upper, kTol);
    }
}

TEST(Metrics, OrderSymmetryTriangleProperty) {
    Rng rng(2024);
    for (int i = 0; i < 200; ++i) {
        const StepPath a = random_step_path(rng, 1.0, 6);
        const StepPath b = random_step_path(rng, 1.0, 6);
        const StepPath c = random_step_path(rng, 1.0, 6);
        const double u = uniform_distance(a, b);
        const auto jab = j1_distance(a, b);
        const auto mab = m1_distance(a, b);
        ASSERT_LE(mab.upper, jab.upper + 2 * kTol) << i;
        ASSERT_LE(jab.upper, u + kTol) << i;
        ASSERT_NEAR(jab.upper, j1_distance(b, a).upper, 2 * kTol) << i;
        ASSERT_NEAR(mab.upper, m1_distance(b, a).upper, 2 * kTol) << i;
        ASSERT_LE(jab.upper, j1_distance(a, c).upper + j1_distance(c, b).upper + 3 * kTol) << i;
        ASSERT_LE(mab.upper, m1_distance(a, c).upper + m1_distance(c, b).upper + 3 * kTol) << i;
    }
}

TEST(Metrics, DecisionProceduresAreMonotone) {
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const StepPath a = random_step_path(rng, 1.0, 5);
        const StepPath b = random_step_path(rng, 1.0, 5);
        bool j_prev = false;
        bool m_prev = false;
        for (double eps = 0.0; eps <= 2.0; eps += 0.05) {
            const bool j = j1_within(a, b, eps);
            const bool m = m1_within(a, b, eps);
            ASSERT_TRUE(!j_prev || j);
            ASSERT_TRUE(!m_prev || m);
            ASSERT_TRUE(!j || m);  // J1-close implies M1-close
            j_prev = j;
            m_prev = m;
        }
    }
}

TEST(Metrics, ParseTags) {
    EXPECT_EQ(parse_metric_kind("J1"), MetricKind::J1);
    EXPECT_EQ(parse_metric_kind("m1"), MetricKind::M1);
    EXPECT_THROW(parse_metric_kind("J2"), ValidationError);
    EXPECT_STREQ(to_string(MetricKind::M1), "M1");
}

TEST(Restrict, KeepsAbsoluteTimes) {
    const StepPath g(1.0, 0.0, {0.2, 0.5, 0.8}, {1.0, 2.0, 3.0});
    const StepPath r = restrict(g, 0.3, 0.8);
    EXPECT_EQ(r.domain_start(), 0.3);
    EXPECT_EQ(r.domain_end(), 0.8);
    EXPECT_EQ(r.initial_value(), 1.0);
    EXPECT_EQ(r.breakpoints(), (std::vector<double>{0.5, 0.8}));
    EXPECT_EQ(r(0.8), 3.0);
    EXPECT_THROW(restrict(g, 0.5, 0.4), ValidationError);
}

TEST(Functionals, SupAndMaxJump) {
    const StepPath g(1.0, 0.5, {0.2, 0.6}, {-1.0, 0.25});
    EXPECT_EQ(sup_functional(g), 0.5);
    EXPECT_EQ(max_jump(g), 1.5);
    EXPECT_EQ(max_jump(StepPath::constant(1.0, 3.0)), 0.0);
}

TEST(InfiniteMetric, ConstantOffsetOracle) {
    const double d = 0.3;
    const StepPath a = StepPath::constant(25.0, 0.0);
    const StepPath b = StepPath::constant(25.0, d);
    const QuadratureParams q{};
    for (auto kind : {MetricKind::J1, MetricKind::M1}) {
        const auto r = dist_infinite(a, b, kind, q);
        const double exact = d * (1.0 - std::exp(-q.t_max));
        EXPECT_NEAR(r.value, exact, 2.0 * r.quad_error + r.tail_bound + 1e-9);
        EXPECT_NEAR(r.value, exact, 5e-3);
        EXPECT_EQ(dist_infinite(a, a, kind, q).value, 0.0);
    }
}

TEST(InfiniteMetric, ValidatesInputs) {
    const StepPath a = StepPath::constant(25.0, 0.0);
    EXPECT_THROW(dist_infinite(a, a, MetricKind::J1, {20.0, 63, 1e-6}), ValidationError);
    EXPECT_THROW(dist_infinite(a, a, MetricKind::J1, {-1.0, 64, 1e-6}), ValidationError);
    const StepPath shortp = StepPath::constant(5.0, 0.0);
    EXPECT_THROW(dist_infinite(shortp, shortp, MetricKind::M1, {}), ValidationError);
}
