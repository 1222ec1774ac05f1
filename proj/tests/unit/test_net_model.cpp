#include "eonpower/net_model.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace eonpower {
namespace {

using testing::bundled;

// Link table of the bundled network, kept here so shared-span counts are
// checked against a second derivation rather than against the loader itself.
const std::map<std::pair<int, int>, double>& bundled_links() {
    static const std::map<std::pair<int, int>, double> links = {
        {{1, 2}, 120}, {{2, 3}, 113}, {{3, 13}, 754}, {{13, 14}, 275}, {{14, 15}, 179},
        {{15, 16}, 266}, {{13, 12}, 88}, {{2, 6}, 110}, {{6, 8}, 534}, {{8, 9}, 150},
        {{4, 5}, 84}, {{5, 7}, 235}, {{7, 8}, 135}, {{8, 11}, 100}, {{11, 10}, 78}};
    return links;
}

double link_km(const std::map<std::pair<int, int>, double>& links, int a, int b) {
    if (auto it = links.find({a, b}); it != links.end()) return it->second;
    return links.at({b, a});
}

using DirectedSpan = std::tuple<int, int, int>;

std::set<DirectedSpan> brute_force_spans(const std::vector<int>& path, const std::map<std::pair<int, int>, double>& links) {
    std::set<DirectedSpan> out;
    for (std::size_t h = 0; h + 1 < path.size(); ++h) {
        const int n = static_cast<int>(std::ceil(link_km(links, path[h], path[h + 1]) / 100.0 - 1e-9));
        for (int s = 0; s < std::max(n, 1); ++s) out.insert({path[h], path[h + 1], s});
    }
    return out;
}

int intersection_size(const std::set<DirectedSpan>& a, const std::set<DirectedSpan>& b) {
    int n = 0;
    for (const auto& x : a) n += static_cast<int>(b.contains(x));
    return n;
}

TEST(ChannelBandwidth, DemandOverSpectralEfficiency) {
    EXPECT_DOUBLE_EQ(channel_bandwidth_hz(100, 4), 25e9);
    EXPECT_DOUBLE_EQ(channel_bandwidth_hz(300, 12), 25e9);
    EXPECT_THROW((void)channel_bandwidth_hz(100, 0), std::invalid_argument);
}

TEST(ModulationTable, SixFormatsByEfficiency) {
    const auto table = modulation_table();
    ASSERT_EQ(table.size(), 6u);
    for (std::size_t i = 1; i < table.size(); ++i) {
        EXPECT_GT(table[i].spectral_efficiency, table[i - 1].spectral_efficiency);
    }
    EXPECT_DOUBLE_EQ(find_modulation("PM-16QAM")->snr_b2b_target_db, 15.15);
    EXPECT_FALSE(find_modulation("PM-128QAM").has_value());
}

TEST(InterpolateParam, AffineBetweenEndpoints) {
    EXPECT_NEAR(interpolate_param({0.22, 0.23}, 5.0, 0.0, 10.0), 0.225, 1e-15);
    EXPECT_DOUBLE_EQ(interpolate_param({0.22, 0.23}, 0.0, 0.0, 10.0), 0.22);
    EXPECT_DOUBLE_EQ(interpolate_param({0.22, 0.23}, 10.0, 0.0, 10.0), 0.23);
    EXPECT_THROW((void)interpolate_param({0.22, 0.23}, 10.5, 0.0, 10.0), std::domain_error);
    EXPECT_THROW((void)interpolate_param({0.22, 0.23}, -0.1, 0.0, 10.0), std::domain_error);
}

TEST(BundledNetwork, TwelveChannelsOnTheGrid) {
    const Network& net = bundled().network;
    ASSERT_EQ(net.size(), 12u);
    for (std::size_t i = 0; i < net.size(); ++i) {
        const auto& lp = net.lightpath(i);
        EXPECT_NEAR(lp.bandwidth_hz * lp.modulation.spectral_efficiency, lp.demand_rate_gbps * 1e9, 1e-3);
        EXPECT_DOUBLE_EQ(lp.center_frequency_hz, 193.55e12 + 50e9 * static_cast<double>(i));
        EXPECT_EQ(lp.route.roadm_count, static_cast<int>(lp.route.nodes.size()));
    }
}

TEST(BundledNetwork, SpanCountsPerRoute) {
    const std::vector<std::size_t> expected = {20, 17, 15, 12, 11, 8, 9, 8, 8, 6, 3, 4};
    const Network& net = bundled().network;
    for (std::size_t i = 0; i < net.size(); ++i) EXPECT_EQ(net.lightpath(i).route.span_count(), expected[i]) << i;
}

TEST(BundledNetwork, SharedSpansMatchBruteForce) {
    const Network& net = bundled().network;
    std::vector<std::set<DirectedSpan>> spans;
    for (const auto& lp : net.lightpaths()) spans.push_back(brute_force_spans(lp.route.nodes, bundled_links()));
    for (std::size_t i = 0; i < net.size(); ++i) {
        for (std::size_t j = 0; j < net.size(); ++j) {
            EXPECT_EQ(net.shared_spans(i, j), intersection_size(spans[i], spans[j])) << i << "," << j;
        }
    }
    EXPECT_EQ(net.shared_spans(0, 8), 0);   // R1 and R9 have no link in common
    EXPECT_EQ(net.shared_spans(7, 11), 2);  // R8 and R12 share 8-11 and 11-10
}

// Random line topologies with random subpaths in either direction.
std::string random_document(std::mt19937_64& rng, std::vector<std::vector<int>>& paths,
                            std::map<std::pair<int, int>, double>& links) {
    std::uniform_int_distribution<int> node_count(3, 9);
    std::uniform_real_distribution<double> km(20.0, 450.0);
    const int n = node_count(rng);
    std::ostringstream doc;
    doc << "grid: {spacing_ghz: 50, guard_ghz: 6}\nnodes: [";
    for (int v = 1; v <= n; ++v) doc << (v > 1 ? ", " : "") << v;
    doc << "]\nlinks:\n";
    links.clear();
    for (int v = 1; v < n; ++v) {
        const double length = std::round(km(rng));
        links[{v, v + 1}] = length;
        doc << "  - {from: " << v << ", to: " << v + 1 << ", km: " << length << "}\n";
    }
    std::uniform_int_distribution<int> pick(1, n);
    std::uniform_int_distribution<int> count(1, 10);
    const int m = count(rng);
    doc << "lightpaths:\n";
    paths.clear();
    for (int c = 0; c < m; ++c) {
        int a = pick(rng), b = pick(rng);
        while (b == a) b = pick(rng);
        std::vector<int> path;
        for (int v = a; v != b; v += (b > a ? 1 : -1)) path.push_back(v);
        path.push_back(b);
        paths.push_back(path);
        doc << "  - {id: L" << c << ", source: " << a << ", destination: " << b << ", path: [";
        for (std::size_t h = 0; h < path.size(); ++h) doc << (h ? ", " : "") << path[h];
        doc << "], rate_gbps: 100, modulation: PM-QPSK}\n";
    }
    return doc.str();
}

TEST(SharedSpansProperty, SymmetricBoundedAndMatchesBruteForce) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::vector<int>> paths;
        std::map<std::pair<int, int>, double> links;
        const auto loaded = load_network(random_document(rng, paths, links));
        const Network& net = loaded.network;
        ASSERT_EQ(net.size(), paths.size());
        for (std::size_t i = 0; i < net.size(); ++i) {
            EXPECT_EQ(net.shared_spans(i, i), static_cast<int>(net.lightpath(i).route.span_count()));
            const auto si = brute_force_spans(paths[i], links);
            for (std::size_t j = 0; j < net.size(); ++j) {
                EXPECT_EQ(net.shared_spans(i, j), net.shared_spans(j, i));
                EXPECT_LE(net.shared_spans(i, j), std::min(net.shared_spans(i, i), net.shared_spans(j, j)));
                EXPECT_EQ(net.shared_spans(i, j), intersection_size(si, brute_force_spans(paths[j], links)));
            }
        }
    }
}

TEST(NetworkOps, EmptyNetworkIsValid) {
    const auto loaded = load_network("grid: {spacing_ghz: 50, guard_ghz: 6}\nnodes: [1, 2]\nlinks: []\n");
    EXPECT_TRUE(loaded.network.empty());
    EXPECT_EQ(loaded.network.route_element_sum(), 0);
}

TEST(NetworkOps, SubsetKeepsOrderAndOverlap) {
    const Network& net = bundled().network;
    const std::vector<std::size_t> keep = {11, 7, 0};
    const Network sub = net.subset(keep);
    ASSERT_EQ(sub.size(), 3u);
    EXPECT_EQ(sub.lightpath(0).route.id, "R12");
    EXPECT_EQ(sub.shared_spans(0, 1), net.shared_spans(11, 7));
    EXPECT_EQ(sub.shared_spans(1, 2), net.shared_spans(7, 0));
    EXPECT_EQ(sub.find("R8"), std::optional<std::size_t>(1));
    EXPECT_FALSE(sub.find("R2").has_value());
}

TEST(NetworkOps, ReplicateCopiesRoutesOntoNewSlots) {
    const Network& net = bundled().network;
    const Network big = replicate(net, 10, 193.55e12);
    ASSERT_EQ(big.size(), 120u);
    EXPECT_EQ(big.route_element_sum(), 10 * net.route_element_sum());
    std::set<double> freqs;
    for (const auto& lp : big.lightpaths()) freqs.insert(lp.center_frequency_hz);
    EXPECT_EQ(freqs.size(), 120u);
    EXPECT_EQ(big.shared_spans(0, 12), 20);  // R1 and its first copy ride the same spans
}

TEST(ConfigErrors, UnknownModulationCarriesPathAndLine) {
    std::string doc = read_text_file(testing::bundled_config_path());
    const auto pos = doc.find("PM-64QAM}");
    doc.replace(pos, 8, "PM-99QAM");
    try {
        (void)load_network(doc);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.field_path(), "lightpaths[10].modulation");
        EXPECT_EQ(e.line(), 40);
    }
}

TEST(ConfigErrors, PhysicalRangeViolationCarriesLine) {
    std::string doc = read_text_file(testing::bundled_config_path());
    const auto pos = doc.find("lambda1: 4.0e-3");
    doc.replace(pos, 15, "lambda1: -1.0");
    try {
        (void)load_network(doc);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.field_path(), "physical.lambda1");
        EXPECT_GT(e.line(), 0);
    }
}

TEST(ConfigErrors, StructuralProblems) {
    const std::string head = "grid: {spacing_ghz: 50, guard_ghz: 6}\nnodes: [1, 2, 3]\nlinks:\n  - {from: 1, to: 2, km: 80}\n";
    EXPECT_THROW((void)load_network(head + "lightpaths:\n  - {id: A, source: 1, destination: 3, path: [1, 2, 3], rate_gbps: 100, modulation: PM-QPSK}\n"),
                 ConfigError);
    EXPECT_THROW((void)load_network(head + "lightpaths:\n  - {id: A, source: 1, destination: 2, path: [1, 2], rate_gbps: 100, modulation: PM-QPSK}\n"
                                            "  - {id: A, source: 1, destination: 2, path: [1, 2], rate_gbps: 100, modulation: PM-QPSK}\n"),
                 ConfigError);
    EXPECT_THROW((void)load_network(head + "lightpaths:\n  - {id: A, source: 1, destination: 2, path: [1, 2], rate_gbps: 100, modulation: PM-QPSK, slot: 0}\n"
                                            "  - {id: B, source: 2, destination: 1, path: [2, 1], rate_gbps: 100, modulation: PM-QPSK, slot: 0}\n"),
                 ConfigError);
    EXPECT_THROW((void)load_network("nodes: [1, 2\nlinks: ["), ConfigError);
    EXPECT_THROW((void)load_network_file("/nonexistent/network.cfg"), ConfigError);
}

}  // namespace
}  // namespace eonpower
