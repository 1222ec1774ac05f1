#include "eonpower/scenarios.hpp"
#include "eonpower/units.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace eonpower {
namespace {

using testing::bundled;

TEST(NoisySnr, ZeroSigmaIsExact) {
    std::mt19937_64 rng(1);
    EXPECT_EQ(noisy_snr(37.5, 0.0, 0.0, rng), 37.5);
    EXPECT_NEAR(noisy_snr(10.0, 3.0103, 0.0, rng), 20.0, 1e-3);
}

TEST(NoisySnr, LogNormalTailAndMean) {
    std::mt19937_64 rng(42);
    const int draws = 1'000'000;
    int inside = 0;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double ratio = noisy_snr(1.0, 0.0, 0.16, rng);
        inside += std::abs(linear_to_db(ratio)) <= 0.6;
        const double eps = ratio - 1.0;
        sum += eps;
        sum_sq += eps * eps;
    }
    EXPECT_GT(static_cast<double>(inside) / draws, 0.9995);
    // Closed-form mean of 10^(X/10) - 1 with X ~ Normal(0, 0.16 dB).
    const double s = 0.16 * kLn10 / 10.0;
    const double expected = std::exp(0.5 * s * s) - 1.0;
    const double mean = sum / draws;
    const double standard_error = std::sqrt((sum_sq / draws - mean * mean) / draws);
    EXPECT_LE(std::abs(mean - expected), 3.0 * standard_error);
}

TEST(Perturbation, GeometricSineSamples) {
    PerturbationSpec spec;
    spec.enabled = true;
    EXPECT_EQ(perturbation(30, spec), 0.0);
    EXPECT_DOUBLE_EQ(perturbation(31, spec), 0.8);
    EXPECT_EQ(perturbation(32, spec), 0.0);
    EXPECT_NEAR(perturbation(33, spec), -0.512, 1e-15);
    EXPECT_EQ(perturbation(50, spec), 0.0);
    for (std::size_t n = 32; n <= 49; n += 2) EXPECT_EQ(perturbation(n, spec), 0.0);
    spec.envelope = PerturbationEnvelope::Constant;
    EXPECT_DOUBLE_EQ(perturbation(33, spec), -0.8);
    spec.enabled = false;
    EXPECT_EQ(perturbation(31, spec), 0.0);
}

TEST(ParseScenario, BundledSection) {
    const auto spec = parse_scenario(read_text_file(testing::bundled_config_path()));
    EXPECT_EQ(spec.tau_schedule, (std::vector<double>{0, 2, 4, 6, 8, 10}));
    EXPECT_TRUE(spec.perturbation.enabled);
    ASSERT_EQ(spec.drops.size(), 2u);
    EXPECT_EQ(spec.drops[0].route, "R10");
    EXPECT_EQ(spec.dynamic_iterations, 210u);
    EXPECT_EQ(parse_scenario("nodes: []\n").tau_schedule, std::vector<double>{0.0});
}

TEST(ParseScenario, ErrorsNameTheField) {
    try {
        (void)parse_scenario("scenario:\n  monitoring: {kind: psychic}\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.field_path(), "scenario.monitoring.kind");
        EXPECT_EQ(e.line(), 2);
    }
    EXPECT_THROW((void)parse_scenario("scenario:\n  drops: {route: R1}\n"), ConfigError);
    ScenarioSpec spec;
    spec.drops.push_back({"R1", 300});
    EXPECT_THROW(spec.validate(bundled().physical), ConfigError);
    spec = ScenarioSpec{};
    spec.tau_schedule = {11.0};
    EXPECT_THROW(spec.validate(bundled().physical), ConfigError);
}

TEST(OptimizerChoice, NamesRoundTrip) {
    for (const char* n : {"chso", "hso", "gd", "none"}) EXPECT_EQ(OptimizerChoice::from_name(n).name(), n);
    EXPECT_THROW((void)OptimizerChoice::from_name("sgd"), std::invalid_argument);
    EXPECT_EQ(OptimizerChoice::from_name("hso").hurricane.variant, HurricaneVariant::Uniform);
}

OptimizerChoice short_chso(std::uint64_t seed) {
    auto c = OptimizerChoice::from_name("chso");
    c.hurricane.iterations = 30;
    c.hurricane.seed = seed;
    return c;
}

TEST(RunScenario, PerfectStaticMatchesPlainOptimize) {
    const auto& loaded = bundled();
    ScenarioSpec spec;
    const auto choice = short_chso(4);
    const auto result = run_scenario(loaded.network, loaded.physical, choice, spec);
    ASSERT_EQ(result.points.size(), 1u);
    const auto& pt = result.points[0];
    EXPECT_EQ(pt.reference_dbm, reference_powers(loaded.network, loaded.physical, 0.0));
    const QotEvaluator qot(loaded.network, loaded.physical, 0.0);
    const auto direct = optimize(qot, choice.hurricane, std::vector<double>(12, 0.0), std::span<const double>(pt.reference_dbm));
    EXPECT_EQ(pt.report.final_powers_dbm, direct.final_powers_dbm);
    EXPECT_EQ(pt.report.final_nmse, direct.final_nmse);
}

TEST(RunScenario, NoisyRunsAreScoredOnTrueQot) {
    const auto& loaded = bundled();
    ScenarioSpec spec;
    spec.monitoring.kind = MonitoringKind::LogNormal;
    const auto pt = run_scenario(loaded.network, loaded.physical, short_chso(2), spec).points[0];
    const QotEvaluator qot(loaded.network, loaded.physical, 0.0);
    EXPECT_DOUBLE_EQ(pt.report.final_j1, objective_j1(qot.psi_dbm(pt.report.final_powers_dbm)));
    for (std::size_t n = 0; n < pt.report.j1_trace.size(); ++n) {
        EXPECT_DOUBLE_EQ(pt.report.j1_trace[n], qot.j1_dbm(pt.report.power_trace_dbm[n]));
    }
}

TEST(RunScenario, RedrawCadenceChangesTheRunButStaysDeterministic) {
    const auto& loaded = bundled();
    ScenarioSpec per_eval;
    per_eval.monitoring.kind = MonitoringKind::LogNormal;
    ScenarioSpec per_iter = per_eval;
    per_iter.monitoring.redraw = NoiseRedraw::Iteration;
    const auto a = run_scenario(loaded.network, loaded.physical, short_chso(3), per_eval).points[0].report;
    const auto b = run_scenario(loaded.network, loaded.physical, short_chso(3), per_iter).points[0].report;
    const auto b2 = run_scenario(loaded.network, loaded.physical, short_chso(3), per_iter).points[0].report;
    EXPECT_NE(a.final_powers_dbm, b.final_powers_dbm);
    EXPECT_EQ(b.final_powers_dbm, b2.final_powers_dbm);
}

TEST(RunScenario, GradientDescentNeedsPerfectMonitoring) {
    const auto& loaded = bundled();
    ScenarioSpec spec;
    spec.monitoring.kind = MonitoringKind::LogNormal;
    EXPECT_THROW((void)run_scenario(loaded.network, loaded.physical, OptimizerChoice::from_name("gd"), spec),
                 std::invalid_argument);
}

TEST(RunScenario, NoneKeepsTheStartAndAgeingUsesPerTauReferences) {
    const auto& loaded = bundled();
    ScenarioSpec spec;
    spec.tau_schedule = {0.0, 10.0};
    const std::vector<double> p0(12, 1.0);
    const auto r = run_scenario(loaded.network, loaded.physical, OptimizerChoice::from_name("none"), spec, p0);
    ASSERT_EQ(r.points.size(), 2u);
    for (const auto& pt : r.points) EXPECT_EQ(pt.report.final_powers_dbm, p0);
    EXPECT_EQ(r.points[1].tau_years, 10.0);
    EXPECT_NE(r.points[0].reference_dbm, r.points[1].reference_dbm);
    EXPECT_EQ(r.points[1].reference_dbm, reference_powers(loaded.network, loaded.physical, 10.0));
}

TEST(RunScenario, PerturbationHitsOnlyChannelsThroughTheNode) {
    const auto& loaded = bundled();
    ScenarioSpec spec;
    spec.perturbation.enabled = true;
    const auto r = run_scenario(loaded.network, loaded.physical, OptimizerChoice::from_name("none"), spec).points[0].report;
    ASSERT_EQ(r.power_trace_dbm.size(), 210u);
    const auto& before = r.power_trace_dbm[29];  // iteration 30
    const auto& hit = r.power_trace_dbm[30];     // iteration 31
    for (std::size_t i = 0; i < 12; ++i) {
        const double expected = loaded.network.lightpath(i).route.traverses(8) ? 0.8 : 0.0;
        EXPECT_NEAR(hit[i] - before[i], expected, 1e-12) << i;
    }
    EXPECT_EQ(r.power_trace_dbm[60], before);
}

TEST(RunScenario, DropsShrinkTheChannelSet) {
    const auto& loaded = bundled();
    auto spec = parse_scenario(read_text_file(testing::bundled_config_path()));
    spec.perturbation.enabled = false;
    const auto pt = run_scenario(loaded.network, loaded.physical, short_chso(1), spec).points[0];
    EXPECT_EQ(pt.report.channel_ids.size(), 10u);
    EXPECT_EQ(pt.reference_dbm.size(), 10u);
    EXPECT_EQ(pt.report.nmse_trace.size(), 210u);
    EXPECT_EQ(pt.report.psi_trace[29].size(), 12u);
    EXPECT_EQ(pt.report.psi_trace[30].size(), 10u);

    spec.drops = {{"R99", 5}};
    EXPECT_THROW((void)run_scenario(loaded.network, loaded.physical, short_chso(1), spec), std::invalid_argument);
}

}  // namespace
}  // namespace eonpower
