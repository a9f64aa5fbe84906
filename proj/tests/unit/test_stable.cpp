#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lsvwip/diagnostics.hpp"
#include "lsvwip/stable.hpp"

using namespace lsvwip;

namespace {

StableLaw law(double alpha, double c, int skew) {
    StableLaw l;
    l.alpha = alpha;
    l.c = c;
    l.skew_sign = skew;
    return l;
}

}  // namespace

TEST(StableLaw, FromLsvParams) {
    const auto l = from_lsv_params(0.6, 0.356, 0.75);
    EXPECT_DOUBLE_EQ(l.alpha, 1.0 / 0.6);
    EXPECT_GT(l.c, 0.0);
    EXPECT_EQ(l.skew_sign, 1);
    const double a = 1.0 / 0.6;
    const double expected =
        0.25 * 0.75 * std::pow(a * 0.356, a) * std::tgamma(1.0 - a) * std::cos(std::numbers::pi * a / 2.0);
    EXPECT_NEAR(l.c, expected, 1e-15);
    EXPECT_EQ(from_lsv_params(0.6, -0.356, 0.75).skew_sign, -1);
    EXPECT_THROW(from_lsv_params(0.4, 1.0, 1.0), DomainError);
    EXPECT_THROW(from_lsv_params(0.6, 0.0, 1.0), HypothesisError);
}

TEST(StableLaw, CharacteristicFunction) {
    const auto l = law(1.6, 0.3, 1);
    EXPECT_EQ(cf(l, 0.0), std::complex<double>(1.0, 0.0));
    for (double t : {-2.0, -0.5, 0.3, 1.7}) {
        EXPECT_NEAR(std::abs(cf(l, t)), std::exp(-0.3 * std::pow(std::abs(t), 1.6)), 1e-14);
        EXPECT_NEAR(std::abs(cf(l, -t) - std::conj(cf(l, t))), 0.0, 1e-14);
    }
}

TEST(StableLaw, SampleMeanIsZero) {
    const auto l = law(1.6, 0.3, 1);
    const auto xs = sample_many(l, 1'000'000, 3, Stream::StableSamples);
    double s = 0.0;
    for (double x : xs) s += x;
    EXPECT_LT(std::abs(s / static_cast<double>(xs.size())), 0.05 * l.sigma());
}

TEST(StableLaw, SamplerMatchesCdf) {
    for (int skew : {1, -1}) {
        const auto l = law(1.7, 0.5, skew);
        const CdfTable F(l);
        const auto xs = sample_many(l, 100'000, 4, Stream::StableSamples);
        EXPECT_LT(ks_distance(EmpiricalMeasure(xs), [&](double x) { return F(x); }), 0.01) << skew;
    }
}

TEST(StableLaw, CdfMirrorSymmetry) {
    const auto pos = law(1.5, 0.8, 1);
    const auto neg = law(1.5, 0.8, -1);
    for (double x : {-3.0, -0.7, 0.0, 0.4, 2.5}) EXPECT_NEAR(cdf(neg, x), 1.0 - cdf(pos, -x), 2e-6) << x;
}

TEST(StableLaw, CdfIsMonotoneWithCorrectLimits) {
    const auto l = law(1.6, 0.27, 1);
    double prev = 0.0;
    for (double x = -20.0; x <= 20.0; x += 0.25) {
        const double F = cdf(l, x);
        ASSERT_GE(F, prev - 2e-6) << x;
        prev = F;
    }
    EXPECT_LT(cdf(l, -20.0), 1e-3);
    EXPECT_GT(cdf(l, 50.0), 0.99);
    EXPECT_THROW(cdf(l, 0.0, -1.0), ValidationError);
}

TEST(StableLaw, TableMatchesDirectEvaluation) {
    const auto l = law(1.6, 0.27, 1);
    const CdfTable F(l);
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
        const double x = 10.0 * (rng.uniform() - 0.5);
        ASSERT_NEAR(F(x), cdf(l, x), 1e-5) << x;
    }
    EXPECT_NEAR(F(F.hi() * 2.0), cdf(l, F.hi() * 2.0), 1e-12);
}

TEST(LevyPath, GridAndScaling) {
    const auto l = law(1.6, 0.27, 1);
    Rng rng(1);
    const StepPath w = sample_levy_path(l, {1.0, 0.01}, rng);
    EXPECT_EQ(w.breakpoints().size(), 100u);
    EXPECT_EQ(w.initial_value(), 0.0);
    EXPECT_EQ(w.breakpoints().back(), 1.0);
    for (std::size_t i = 0; i < w.breakpoints().size(); ++i)
        ASSERT_NEAR(w.breakpoints()[i], 0.01 * static_cast<double>(i + 1), 1e-12);
    EXPECT_THROW(sample_levy_path(l, {1.0, 0.3}, rng), ValidationError);
    EXPECT_THROW(sample_levy_path(l, {1.0, 0.0}, rng), ValidationError);
}

TEST(StableLaw, RescaleAndLift) {
    const auto l = law(1.6, 0.3, -1);
    EXPECT_DOUBLE_EQ(rescale_full_system(l, 3.0).c, 0.1);
    EXPECT_NEAR(lift_to_induced_system(l, 3.0).c, 0.9, 1e-15);
    EXPECT_EQ(lift_to_induced_system(l, 3.0).skew_sign, -1);
    EXPECT_THROW(rescale_full_system(l, 0.0), ValidationError);
    EXPECT_THROW(lift_to_induced_system(l, -1.0), ValidationError);
}

TEST(StableLaw, Validation) {
    EXPECT_THROW(law(2.5, 1.0, 1).validate(), DomainError);
    EXPECT_THROW(law(1.5, -1.0, 1).validate(), ValidationError);
    EXPECT_THROW(law(1.5, 1.0, 0).validate(), ValidationError);
}
