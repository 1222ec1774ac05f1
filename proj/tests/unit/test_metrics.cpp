#include "eonpower/metrics.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace eonpower {
namespace {

TEST(Nmse, KnownValues) {
    const std::vector<double> ref = {1e-3, 2e-3, 3e-3};
    EXPECT_EQ(nmse(ref, ref), 0.0);
    std::vector<double> doubled = ref;
    for (double& v : doubled) v *= 2.0;
    EXPECT_DOUBLE_EQ(nmse(doubled, ref), 1.0);
    EXPECT_THROW((void)nmse(ref, std::vector<double>{0.0, 0.0, 0.0}), std::invalid_argument);
    EXPECT_THROW((void)nmse(ref, std::vector<double>{1.0}), std::invalid_argument);
}

TEST(Nmse, InvariantUnderJointPermutation) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(1e-4, 1e-2);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> a(12), b(12);
        for (std::size_t i = 0; i < 12; ++i) {
            a[i] = u(rng);
            b[i] = u(rng);
        }
        const double before = nmse(a, b);
        std::vector<std::size_t> perm(12);
        for (std::size_t i = 0; i < 12; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<double> pa(12), pb(12);
        for (std::size_t i = 0; i < 12; ++i) {
            pa[i] = a[perm[i]];
            pb[i] = b[perm[i]];
        }
        EXPECT_NEAR(nmse(pa, pb), before, before * 1e-12);
    }
}

TEST(Nmse, MeanOverRealizations) {
    const std::vector<double> ref = {1.0, 1.0};
    EXPECT_DOUBLE_EQ(mean_nmse({{1.0, 1.0}, {2.0, 2.0}}, ref), 0.5);
    EXPECT_THROW((void)mean_nmse({}, ref), std::invalid_argument);
}

TEST(PowerPenalty, DoublePowerIsThreeDb) {
    const auto p = power_penalty(std::vector<double>{2e-3, 1e-3}, std::vector<double>{1e-3, 1e-3});
    EXPECT_NEAR(p[0], 3.0103, 1e-4);
    EXPECT_EQ(p[1], 0.0);
    EXPECT_NEAR(max_abs(std::vector<double>{-4.0, 3.0}), 4.0, 0.0);
    EXPECT_THROW((void)power_penalty(std::vector<double>{0.0}, std::vector<double>{1.0}), std::invalid_argument);
}

TEST(MarginSuccess, InsideTheToleranceBand) {
    EXPECT_TRUE(margin_success(std::vector<double>{0.996, 1.001, 1.0}, 4e-3, 1e-3));
    EXPECT_FALSE(margin_success(std::vector<double>{0.995}, 4e-3, 1e-3));
    EXPECT_FALSE(margin_success(std::vector<double>{1.002}, 4e-3, 1e-3));
}

TEST(Settling, ConstantTraceSettlesAtOne) {
    const std::vector<double> ref = {1e-3, 2e-3};
    const std::vector<std::vector<double>> trace(10, ref);
    const auto s = settling_iteration(trace, ref);
    ASSERT_TRUE(s.mean.has_value());
    EXPECT_DOUBLE_EQ(*s.mean, 1.0);
    EXPECT_DOUBLE_EQ(s.score(), 1.0);
}

TEST(Settling, LastExcursionCounts) {
    const std::vector<double> ref = {1e-3};
    std::vector<std::vector<double>> trace(10, ref);
    trace[4][0] = 2e-3;
    const auto s = settling_iteration(trace, ref);
    EXPECT_EQ(s.per_channel[0], std::optional<std::size_t>(6));
}

TEST(Settling, NeverSettlingIsFlagged) {
    const std::vector<double> ref = {1e-3, 1e-3};
    std::vector<std::vector<double>> trace(10, ref);
    for (auto& row : trace) row[1] = 5e-3;
    const auto s = settling_iteration(trace, ref);
    EXPECT_FALSE(s.mean.has_value());
    EXPECT_FALSE(s.per_channel[1].has_value());
    EXPECT_DOUBLE_EQ(s.score(), (1.0 + 11.0) / 2.0);
    EXPECT_THROW((void)settling_iteration({}, ref), std::invalid_argument);
}

TEST(RmIntegral, ZeroAtUnitMarginAndPerChannelMean) {
    EXPECT_EQ(rm_integral({std::vector<double>(12, 1.0)}), 0.0);
    std::vector<double> psi(12, 1.0);
    psi[0] = 2.0;
    EXPECT_NEAR(rm_integral({psi}), 10.0 * std::log10(2.0) / 12.0, 1e-15);
    EXPECT_NEAR(rm_integral({psi, psi}), 2.0 * 10.0 * std::log10(2.0) / 12.0, 1e-15);
}

double qot_cost(double m, double route_sum) { return 19.0 * m * m + 5.0 * m + route_sum; }

TEST(Flops, ClosedFormsByAlgorithm) {
    const double m = 12, k = 132, n = 180, r = 263;
    const double c = qot_cost(m, r);
    EXPECT_DOUBLE_EQ(flops({FlopAlgorithm::Chso, m, k, n, 0, 0, r}), n * k * (25.0 + 3.0 * c));
    EXPECT_DOUBLE_EQ(flops({FlopAlgorithm::Hso, m, k, n, 0, 0, r}), n * k * (31.0 + 3.0 * c));
    const double gi = 31, gb = 1.74;
    EXPECT_DOUBLE_EQ(flops({FlopAlgorithm::Gd, m, 0, 0, gi, gb, r}),
                     gi * (m * m + 4 * m + 3) + c * gi * (5 * gb * m + 5 * m + 1));
}

TEST(Flops, UniformDrawsCostSixMorePerParcelStep) {
    for (double k : {0.0, 1.0, 50.0}) {
        for (double n : {0.0, 7.0, 300.0}) {
            const double hso = flops({FlopAlgorithm::Hso, 12, k, n, 0, 0, 100});
            const double chso = flops({FlopAlgorithm::Chso, 12, k, n, 0, 0, 100});
            EXPECT_DOUBLE_EQ(hso - chso, 6.0 * n * k);
        }
    }
    EXPECT_EQ(flops({FlopAlgorithm::Chso, 12, 0, 180, 0, 0, 100}), 0.0);
    EXPECT_EQ(flops({FlopAlgorithm::Hso, 12, 132, 0, 0, 0, 100}), 0.0);
}

}  // namespace
}  // namespace eonpower
