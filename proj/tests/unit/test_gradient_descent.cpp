#include "eonpower/gradient_descent.hpp"
#include "eonpower/units.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace eonpower {
namespace {

using testing::bundled;

class GdTest : public ::testing::Test {
protected:
    const LoadedNetwork& loaded = bundled();
    QotEvaluator qot{loaded.network, loaded.physical, 0.0};
};

TEST_F(GdTest, GradientMatchesWiderCentralDifference) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dbm(-5.0, 5.0);
    for (int t = 0; t < 10; ++t) {
        std::vector<double> p(qot.size());
        for (double& x : p) x = dbm(rng);
        const auto g = gradient_j1(qot, p);
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double h = 1e-4;
            auto up = p, down = p;
            up[i] += h;
            down[i] -= h;
            const double fd = (qot.j1_dbm(up) - qot.j1_dbm(down)) / (2.0 * h);
            EXPECT_NEAR(g[i], fd, 1e-6 * std::max(1.0, std::abs(fd))) << i;
        }
    }
}

TEST_F(GdTest, OneSidedDifferenceAtTheBound) {
    std::vector<double> p(qot.size(), 0.0);
    p[2] = 20.0;
    const auto g = gradient_j1(qot, p);
    auto down = p;
    down[2] -= 1e-4;
    EXPECT_NEAR(g[2], (qot.j1_dbm(p) - qot.j1_dbm(down)) / 1e-4, 1e-3 * std::max(1.0, std::abs(g[2])));
}

TEST(DescentDirection, UnitLengthOrZero) {
    const std::vector<double> g = {3.0, -4.0};
    const auto d = descent_direction(g);
    EXPECT_DOUBLE_EQ(d[0], -0.6);
    EXPECT_DOUBLE_EQ(d[1], 0.8);
    const auto z = descent_direction(std::vector<double>{0.0, 0.0});
    EXPECT_EQ(z, (std::vector<double>{0.0, 0.0}));
}

TEST_F(GdTest, ReachesTheFeasibleOptimum) {
    const auto r = optimize_gd(qot, GdParams{}, std::vector<double>(qot.size(), 0.0));
    EXPECT_LT(r.final_j1, 1e-3);
    EXPECT_TRUE(r.success);
    for (std::size_t n = 1; n < r.j1_trace.size(); ++n) EXPECT_LE(r.j1_trace[n], r.j1_trace[n - 1]);
    EXPECT_EQ(r.algorithm, "gd");
    EXPECT_GT(r.flops, 0.0);
}

TEST_F(GdTest, MultiStartAgreement) {
    const std::vector<std::vector<double>> starts = {
        std::vector<double>(qot.size(), 0.0), std::vector<double>(qot.size(), -5.0), std::vector<double>(qot.size(), 5.0)};
    std::vector<std::vector<double>> finals;
    for (const auto& s : starts) {
        const auto r = optimize_gd(qot, GdParams{}, s);
        EXPECT_LT(r.final_j1, 1e-3);
        finals.push_back(dbm_to_watts(r.final_powers_dbm));
    }
    for (std::size_t a = 0; a < finals.size(); ++a) {
        for (std::size_t b = 0; b < finals.size(); ++b) {
            double diff = 0.0;
            for (std::size_t i = 0; i < finals[a].size(); ++i) {
                diff = std::max(diff, std::abs(finals[a][i] - finals[b][i]) / finals[b][i]);
            }
            EXPECT_LT(diff, 1e-4);
        }
    }
}

TEST_F(GdTest, RestartFromOptimumStopsQuickly) {
    const auto first = optimize_gd(qot, GdParams{}, std::vector<double>(qot.size(), 0.0));
    const auto again = optimize_gd(qot, GdParams{}, first.final_powers_dbm);
    EXPECT_LE(again.final_j1, first.final_j1);
    EXPECT_LE(again.iterations, 5u);
}

TEST(GdParams, Validation) {
    GdParams p;
    EXPECT_NO_THROW(p.validate());
    p.shrink = 1.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = GdParams{};
    p.fd_step_db = 0.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = GdParams{};
    p.max_iterations = 0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace eonpower
