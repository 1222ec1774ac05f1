#pragma once

#include "eonpower/gradient_descent.hpp"
#include "eonpower/hurricane.hpp"
#include "eonpower/net_model.hpp"
#include "eonpower/run_report.hpp"

#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace eonpower {

enum class MonitoringKind { Perfect, LogNormal };

/// When monitor errors are redrawn: on every pressure evaluation, or once per
/// optimizer iteration (one report per channel per control cycle).
enum class NoiseRedraw { Evaluation, Iteration };

struct MonitoringSpec {
    MonitoringKind kind = MonitoringKind::Perfect;
    double mu_db = 0.0;
    double sigma_db = 0.16;
    NoiseRedraw redraw = NoiseRedraw::Evaluation;
};

enum class PerturbationEnvelope { Geometric, Constant };

struct PerturbationSpec {
    bool enabled = false;
    double amplitude_db = 0.8;
    int period = 4;                 // iterations per sine period
    std::size_t start = 30;         // active for start < n <= end
    std::size_t end = 49;
    int node = 8;                   // channels whose path crosses this node are hit
    PerturbationEnvelope envelope = PerturbationEnvelope::Geometric;
};

struct DropEvent {
    std::string route;
    std::size_t iteration = 0;      // channel is gone from iteration + 1 on
};

struct ScenarioSpec {
    MonitoringSpec monitoring;
    std::vector<double> tau_schedule{0.0};
    PerturbationSpec perturbation;
    std::vector<DropEvent> drops;
    std::size_t dynamic_iterations = 210;

    [[nodiscard]] bool dynamic() const noexcept { return perturbation.enabled || !drops.empty(); }
    void validate(const PhysicalParams& params) const;
};

/// Reads the optional `scenario` section of a configuration document.
[[nodiscard]] ScenarioSpec parse_scenario(std::string_view document);

/// Observed SNR = true SNR * 10^(X/10), X ~ Normal(mu_db, sigma_db).
[[nodiscard]] double noisy_snr(double true_snr, double mu_db, double sigma_db, std::mt19937_64& rng);

/// dB offset added to the affected channels at iteration n (1-based).
[[nodiscard]] double perturbation(std::size_t n, const PerturbationSpec& spec);

enum class OptimizerKind { Chso, Hso, Gd, None };

struct OptimizerChoice {
    OptimizerKind kind = OptimizerKind::Chso;
    HurricaneParams hurricane = HurricaneParams::chso();
    GdParams gd;

    [[nodiscard]] static OptimizerChoice from_name(std::string_view name);
    [[nodiscard]] std::string name() const;
};

struct ScenarioPoint {
    double tau_years = 0.0;
    std::vector<double> reference_dbm;
    std::vector<double> penalty_db;   // final power penalty per channel
    RunReport report;
};

struct ScenarioResult {
    std::vector<ScenarioPoint> points;
};

/// Gradient-descent optimum from a flat 0 dBm start; the reference for
/// NMSE and power-penalty metrics.
[[nodiscard]] std::vector<double> reference_powers(const Network& network, const PhysicalParams& params,
                                                   double tau_years, const GdParams& gd = {});

/// Static specs: one run per tau, each against its own reference, with the
/// optimizer seeing monitored (possibly noisy) SNRs and the report scored on
/// true QoT. Dynamic specs (drops or perturbation): one trajectory that starts
/// from the full-network optimum, loses the dropped channels, and is scored
/// against the survivors' optimum. OptimizerKind::None leaves powers untouched.
[[nodiscard]] ScenarioResult run_scenario(const Network& network, const PhysicalParams& params,
                                          const OptimizerChoice& optimizer, const ScenarioSpec& spec,
                                          std::span<const double> p0_dbm = {});

}  // namespace eonpower
