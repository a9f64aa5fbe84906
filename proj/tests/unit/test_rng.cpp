#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "lsvwip/diagnostics.hpp"
#include "lsvwip/rng.hpp"

using namespace lsvwip;

TEST(Rng, SameSeedSameStream) {
    Rng a(123);
    Rng b(123);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next(), b.next());
}

TEST(Rng, DerivedSeedsAreDistinct) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t label = 0; label < 1000; ++label) seen.insert(derive_seed(42, label));
    EXPECT_EQ(seen.size(), 1000u);
    EXPECT_NE(derive_seed(1, 2), derive_seed(2, 1));
}

TEST(Rng, TaskStreamsDifferAcrossTasksAndStreams) {
    Rng a = Rng::for_task(7, Stream::Demo, 0);
    Rng b = Rng::for_task(7, Stream::Demo, 1);
    Rng c = Rng::for_task(7, Stream::Synthetic, 0);
    const auto x = a.next();
    EXPECT_NE(x, b.next());
    EXPECT_NE(x, c.next());
}

TEST(Rng, UniformRanges) {
    Rng r(9);
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        const double v = r.uniform_open();
        ASSERT_GT(v, 0.0);
        ASSERT_LT(v, 1.0);
        ASSERT_GT(r.exponential(), 0.0);
    }
}

TEST(Rng, UniformPassesKs) {
    Rng r(11);
    std::vector<double> xs(100000);
    for (auto& x : xs) x = r.uniform();
    const double ks = ks_distance(EmpiricalMeasure(xs), [](double x) { return std::clamp(x, 0.0, 1.0); });
    EXPECT_LT(ks, 0.01);
}

TEST(Rng, ExponentialMeanIsOne) {
    Rng r(5);
    double s = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) s += r.exponential();
    EXPECT_NEAR(s / n, 1.0, 0.01);
}
