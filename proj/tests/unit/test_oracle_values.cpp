// Cross-checks the C++ QoT against values produced by tests/oracles/gn_oracle.py.

#include "eonpower/qot.hpp"
#include "eonpower/units.hpp"

#include "gn_oracle_values.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <array>
#include <string>

namespace eonpower {
namespace {

constexpr double kRelTol = 1e-9;

struct OracleCase {
    std::string label;
    double tau;
    double nli_scale;
    const std::array<double, 12>* ase;
    const std::array<double, 12>* sci;
    const std::array<double, 12>* xci;
    const std::array<double, 12>* snr;
    const std::array<double, 12>* snr_b2b;
    const std::array<double, 12>* psi;
    double j1;
};

std::vector<OracleCase> cases() {
    return {
        {"bol", oracle::kBolTau, oracle::kBolNliScale, &oracle::kBolAse, &oracle::kBolSci, &oracle::kBolXci,
         &oracle::kBolSnr, &oracle::kBolSnrB2b, &oracle::kBolPsi, oracle::kBolJ1},
        {"mid", oracle::kMidTau, oracle::kMidNliScale, &oracle::kMidAse, &oracle::kMidSci, &oracle::kMidXci,
         &oracle::kMidSnr, &oracle::kMidSnrB2b, &oracle::kMidPsi, oracle::kMidJ1},
        {"eol", oracle::kEolTau, oracle::kEolNliScale, &oracle::kEolAse, &oracle::kEolSci, &oracle::kEolXci,
         &oracle::kEolSnr, &oracle::kEolSnrB2b, &oracle::kEolPsi, oracle::kEolJ1},
    };
}

void expect_close(const std::vector<double>& actual, const std::array<double, 12>& expected, const std::string& what) {
    ASSERT_EQ(actual.size(), expected.size()) << what;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        EXPECT_LT(testing::relative_error(actual[i], expected[i]), kRelTol) << what << " channel " << i;
    }
}

class OracleTest : public ::testing::TestWithParam<std::size_t> {};

TEST_P(OracleTest, EvaluatorBreakdownMatches) {
    const OracleCase c = cases()[GetParam()];
    PhysicalParams params = testing::bundled().physical;
    params.nli_scale = c.nli_scale;
    const QotEvaluator qot(testing::bundled().network, params, c.tau);
    const auto b = qot.breakdown_dbm(oracle::kLaunchDbm);
    expect_close(b.ase_psd, *c.ase, c.label + " ase");
    expect_close(b.sci_psd, *c.sci, c.label + " sci");
    expect_close(b.xci_psd, *c.xci, c.label + " xci");
    expect_close(b.snr, *c.snr, c.label + " snr");
    expect_close(b.snr_b2b, *c.snr_b2b, c.label + " snr_b2b");
    expect_close(b.psi, *c.psi, c.label + " psi");
    expect_close(qot.psi_dbm(oracle::kLaunchDbm), *c.psi, c.label + " fast psi");
    EXPECT_LT(testing::relative_error(qot.j1_dbm(oracle::kLaunchDbm), c.j1), kRelTol);
}

TEST_P(OracleTest, FreeFunctionsMatch) {
    const OracleCase c = cases()[GetParam()];
    PhysicalParams params = testing::bundled().physical;
    params.nli_scale = c.nli_scale;
    const PhysicalState state = params.at(c.tau);
    const Network& net = testing::bundled().network;
    const auto powers = dbm_to_watts(oracle::kLaunchDbm);
    std::vector<double> ase, sci, xci, s, b2b, psi;
    for (std::size_t i = 0; i < net.size(); ++i) {
        ase.push_back(ase_psd(net.lightpath(i), state));
        sci.push_back(sci_psd(net, i, powers[i], state));
        xci.push_back(xci_psd(net, i, powers, state));
        s.push_back(snr(net, i, powers, state));
        b2b.push_back(snr_b2b(s.back(), state));
    }
    expect_close(ase, *c.ase, c.label + " ase");
    expect_close(sci, *c.sci, c.label + " sci");
    expect_close(xci, *c.xci, c.label + " xci");
    expect_close(s, *c.snr, c.label + " snr");
    expect_close(b2b, *c.snr_b2b, c.label + " snr_b2b");
    expect_close(residual_margin(net, powers, state), *c.psi, c.label + " psi");
}

INSTANTIATE_TEST_SUITE_P(AgeingPoints, OracleTest, ::testing::Values(0u, 1u, 2u));

TEST(OracleBer, CalibratedCurveAboveTarget) {
    const auto table = modulation_table();
    for (std::size_t k = 0; k < table.size(); ++k) {
        const double s = 1.1 * db_to_linear(table[k].snr_b2b_target_db);
        EXPECT_LT(testing::relative_error(ber(table[k], s, 4e-3), oracle::kBerAt110Percent[k]), 1e-9) << table[k].name;
    }
}

}  // namespace
}  // namespace eonpower
