#pragma once

#include "eonpower/hurricane.hpp"
#include "eonpower/metrics.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace eonpower {

inline constexpr double kGoldenRatio = 1.6180339887498948482;

struct GoldenSectionResult {
    double lower = 0.0;
    double upper = 0.0;
    double midpoint = 0.0;
    std::size_t evaluations = 0;
    std::vector<double> widths;      // bracket width after each reduction
};

/// Minimizes a unimodal f on [lower, upper] until the bracket is narrower than
/// tolerance. Throws std::runtime_error if f returns a non-finite value.
[[nodiscard]] GoldenSectionResult golden_section(const std::function<double(double)>& f, double lower, double upper,
                                                 double tolerance, std::size_t max_reductions = 500);

struct IpoConfig {
    std::size_t loops = 30;                 // N_lps
    double tol_r0 = 1e-2;                   // bracket tolerance on log10(r0)
    double tol_omega = 1e-2;                // bracket tolerance on omega, rad
    double r0_log_lower = -13.0;            // log10 of p_min in watts
    double r0_log_upper = -1.0;             // log10 of p_max in watts
    double omega_lower = kOmegaMin;
    double omega_upper = kOmegaMax;
    std::size_t realizations = 100;         // N_r
    std::uint64_t seed_base = 1;
    double recenter_ratio = kGoldenRatio;   // shrink base for the per-loop bracket
    std::size_t workers = 0;                // 0 = hardware concurrency

    void validate() const;
};

enum class TuneTarget { R0, Omega };

struct TuneStep {
    std::size_t loop = 0;
    TuneTarget target = TuneTarget::R0;
    double lower = 0.0;        // bracket searched this loop (log10 for r0)
    double upper = 0.0;
    double value = 0.0;        // tuned value (r0 in linear units)
    double objective = 0.0;    // mean final J1 at the tuned value
};

struct TuneResult {
    double r0 = 0.0;
    double omega = 0.0;
    std::vector<TuneStep> history;
};

/// Mean final J1 over `realizations` runs with seeds seed_base, seed_base + 1, ...
[[nodiscard]] double mean_final_j1(const QotEvaluator& qot, const HurricaneParams& params,
                                   std::span<const double> p0_dbm, std::size_t realizations,
                                   std::uint64_t seed_base, std::size_t workers = 0);

/// One golden-section pass over `target` inside [lower, upper] with the other
/// parameter held at its value in `base`. Returns the bracket midpoint; r0
/// brackets are in log10 and the return is linear r0.
[[nodiscard]] TuneStep tune_parameter(TuneTarget target, const QotEvaluator& qot, const HurricaneParams& base,
                                      std::span<const double> p0_dbm, const IpoConfig& config, double lower,
                                      double upper);

/// Alternating r0 / omega tuning with a bracket that narrows every loop
/// around the previous value.
[[nodiscard]] TuneResult tune(const QotEvaluator& qot, const HurricaneParams& base, std::span<const double> p0_dbm,
                              const IpoConfig& config);

/// Bracket for loop n (1-based) around `center`: the full box on loop 1, then
/// a window whose half-width is the distance to the nearer bound shrunk by
/// ratio^(n-2), clamped to the box.
[[nodiscard]] std::pair<double, double> recentered_bracket(std::size_t loop, double center, double box_lower,
                                                           double box_upper, double ratio);

struct SurfaceCell {
    double first = 0.0;
    double second = 0.0;
    std::size_t successes = 0;
    std::size_t trials = 0;

    [[nodiscard]] double probability() const noexcept {
        return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
    }
};

struct Surface {
    std::string first_name;
    std::string second_name;
    std::vector<SurfaceCell> cells;
};

inline constexpr double kSuccessThreshold = 0.94;

/// Success probability over r0 x iteration for fixed omega, K and seeds.
/// Iteration 0 scores the starting point.
[[nodiscard]] Surface cpos_ps1(const QotEvaluator& qot, const HurricaneParams& base, std::span<const double> p0_dbm,
                               const std::vector<double>& r0_values, const std::vector<std::size_t>& iterations,
                               std::size_t realizations, std::uint64_t seed_base, std::size_t workers = 0);

/// Success probability over K x N_f for fixed r0 and omega. K = 0 or N_f = 0
/// cells score zero.
[[nodiscard]] Surface cpos_ps2(const QotEvaluator& qot, const HurricaneParams& base, std::span<const double> p0_dbm,
                               const std::vector<std::size_t>& parcel_counts,
                               const std::vector<std::size_t>& iteration_budgets, std::size_t realizations,
                               std::uint64_t seed_base, std::size_t workers = 0);

void write_surface_csv(std::ostream& out, const Surface& surface);

struct ParetoPoint {
    std::size_t parcels = 0;
    std::size_t iterations = 0;
    double probability = 0.0;
    double flops = 0.0;
};

/// Non-dominated (K, N_f) pairs among cells with probability >= threshold,
/// ordered by increasing N_f (and so decreasing K). Surface axes: first = K, second = N_f.
[[nodiscard]] std::vector<ParetoPoint> pareto_frontier(const Surface& surface, const FlopModel& model,
                                                       double threshold = kSuccessThreshold);

/// Frontier point with the lowest flop count. Throws on an empty frontier.
[[nodiscard]] ParetoPoint select_tradeoff(const std::vector<ParetoPoint>& frontier);

}  // namespace eonpower
