#pragma once

#include "eonpower/gradient_descent.hpp"
#include "eonpower/hurricane.hpp"
#include "eonpower/ipo.hpp"
#include "eonpower/metrics.hpp"
#include "eonpower/net_model.hpp"
#include "eonpower/run_report.hpp"
#include "eonpower/scenarios.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eonpower::experiments {

/// Bad command line or plan; maps to exit status 1.
class PlanError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kExperimentNames[] = {"ipo",       "allocate", "cpos",         "pareto",
                                                        "opm-noise", "ageing",   "perturbation", "complexity"};

struct ExperimentPlan {
    std::string experiment;
    std::filesystem::path config;
    std::vector<std::string> algorithms;     // chso, hso, gd, none
    std::vector<std::uint64_t> seeds;
    std::filesystem::path out;
    std::vector<double> taus;                // empty: the config's schedule
    std::vector<std::string> overrides;      // dotted.path=yaml-value
    std::vector<std::string> scenarios;      // complexity loadings: A, B, C
    std::size_t workers = 0;                 // 0 = hardware concurrency

    /// Throws PlanError.
    void validate() const;
};

struct CposGrid {
    std::size_t realizations = 100;
    std::vector<double> r0_values;           // Ps1 rows
    std::size_t iteration_step = 10;         // Ps1 columns: 0, step, ..., N_f
    std::vector<std::size_t> parcel_factors; // Ps2 rows: K = M * N_w
    std::vector<std::size_t> budgets;        // Ps2 columns: N_f
};

/// Everything a run needs, read from one configuration document.
struct Setup {
    std::string document;                    // after overrides
    Network network;
    PhysicalParams physical;
    ScenarioSpec scenario;
    HurricaneParams chso = HurricaneParams::chso();
    HurricaneParams hso = HurricaneParams::hso();
    GdParams gd;
    IpoConfig ipo;
    CposGrid cpos;

    [[nodiscard]] OptimizerChoice optimizer(std::string_view name) const;
};

/// Sets dotted YAML paths in a document. Values are parsed as YAML, so lists
/// and numbers keep their type. Throws PlanError on a malformed override.
[[nodiscard]] std::string apply_overrides(std::string_view document, const std::vector<std::string>& overrides);

[[nodiscard]] Setup load_setup(std::string_view document);
[[nodiscard]] Setup load_setup_file(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Flat 0 dBm starting eye.
[[nodiscard]] std::vector<double> flat_start(const Network& network);

// =============================================================================
// In-memory experiments
// =============================================================================

struct RunSummary {
    RunReport report;
    double settling = 0.0;     // SettlingResult::score()
    double rm = 0.0;           // rm_integral of the psi trace
};

struct AllocationResult {
    std::string algorithm;
    double tau_years = 0.0;
    std::vector<double> reference_dbm;
    std::vector<RunSummary> runs;            // seed order

    /// Runs with NMSE <= nmse_max and max |penalty| <= penalty_max_db.
    [[nodiscard]] std::size_t count_good(double nmse_max, double penalty_max_db) const;
};

[[nodiscard]] AllocationResult run_allocation(const Setup& setup, std::string_view algorithm,
                                              const std::vector<std::uint64_t>& seeds, double tau_years,
                                              std::size_t workers = 0);

struct TuningResult {
    std::string algorithm;
    TuneResult tune;
};

[[nodiscard]] TuningResult run_tuning(const Setup& setup, std::string_view algorithm, std::size_t workers = 0);

struct CposResult {
    std::string algorithm;
    Surface ps1;
    Surface ps2;
};

[[nodiscard]] CposResult run_cpos(const Setup& setup, std::string_view algorithm, bool with_ps2,
                                  std::size_t workers = 0);

struct ParetoResult {
    std::string algorithm;
    Surface ps2;
    std::vector<ParetoPoint> frontier;
    std::optional<ParetoPoint> tradeoff;
};

[[nodiscard]] ParetoResult pareto_from_surface(const Setup& setup, std::string_view algorithm, Surface ps2);

struct NoiseResult {
    std::string algorithm;
    std::vector<double> mean_nmse_trace;            // over seeds, per iteration
    std::vector<std::vector<double>> penalty_db;    // [seed][channel], final
    std::vector<double> final_nmse;                 // per seed

    /// max over channels of |mean over seeds of the final penalty|.
    [[nodiscard]] double max_mean_penalty_db() const;
    [[nodiscard]] double mean_final_nmse() const;
};

[[nodiscard]] NoiseResult run_opm_noise(const Setup& setup, std::string_view algorithm,
                                        const std::vector<std::uint64_t>& seeds, std::size_t workers = 0);

struct AgeingPoint {
    double tau_years = 0.0;
    double mean_penalty_db = 0.0;    // mean over seeds of the per-run channel-mean penalty
    double std_penalty_db = 0.0;     // sample deviation of the same per-run values
};

struct AgeingResult {
    std::string algorithm;
    double lower_band_db = 0.0;      // 10 log10(1 - lambda1)
    std::vector<AgeingPoint> points;

    [[nodiscard]] bool crosses_lower_band() const;
};

[[nodiscard]] AgeingResult run_ageing(const Setup& setup, std::string_view algorithm,
                                      const std::vector<std::uint64_t>& seeds, const std::vector<double>& taus,
                                      std::size_t workers = 0);

struct DropResult {
    std::string algorithm;
    std::vector<double> mean_nmse_trace;   // per iteration, survivors vs their optimum
    std::vector<double> final_nmse;        // per seed

    [[nodiscard]] double mean_final_nmse() const;
};

[[nodiscard]] DropResult run_perturbation(const Setup& setup, std::string_view algorithm,
                                          const std::vector<std::uint64_t>& seeds, std::size_t workers = 0);

struct ComplexityRow {
    std::string scenario;
    std::size_t channels = 0;
    std::string algorithm;
    double parcels = 0;
    double iterations = 0;
    double flops = 0;
};

struct ComplexityResult {
    std::vector<ComplexityRow> rows;
    double gd_iterations = 0;       // measured on the base network
    double gd_backtracks = 0;

    /// Least-squares slope of log(flops) against log(M) for one algorithm.
    [[nodiscard]] double loglog_slope(std::string_view algorithm) const;
};

/// Copies per loading: A = 1, B = 10, C = 20.
[[nodiscard]] std::size_t scenario_copies(std::string_view scenario);

[[nodiscard]] ComplexityResult run_complexity(const Setup& setup, const std::vector<std::string>& scenarios);

// =============================================================================
// Artifacts
// =============================================================================

/// Executes a plan and writes its data files plus manifest.json into plan.out.
/// Returns the data files written, relative to plan.out, in write order.
std::vector<std::filesystem::path> run(const ExperimentPlan& plan);

}  // namespace eonpower::experiments
