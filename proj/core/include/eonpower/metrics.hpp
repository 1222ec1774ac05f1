#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace eonpower {

/// ||p_hat - p_ref||^2 / ||p_ref||^2 on linear powers. Throws on a zero
/// reference or mismatched sizes.
[[nodiscard]] double nmse(std::span<const double> candidate_w, std::span<const double> reference_w);

/// Mean NMSE over several realizations against one reference.
[[nodiscard]] double mean_nmse(const std::vector<std::vector<double>>& candidates_w,
                               std::span<const double> reference_w);

/// Per-channel 10*log10(p / p_ref) in dB. Negative means under-powered.
[[nodiscard]] std::vector<double> power_penalty(std::span<const double> powers_w,
                                                std::span<const double> reference_w);

[[nodiscard]] double max_abs(std::span<const double> values) noexcept;

/// True when every residual margin lies in [1 - lambda1, 1 + lambda2].
[[nodiscard]] bool margin_success(std::span<const double> psi, double lambda1, double lambda2) noexcept;

inline constexpr double kSettlingToleranceW = 1e-7;

struct SettlingResult {
    std::vector<std::optional<std::size_t>> per_channel;  // 1-based iteration
    std::optional<double> mean;                           // empty if any channel never settles
    std::size_t samples = 0;

    /// Mean with unsettled channels counted as samples + 1, for ranking runs.
    [[nodiscard]] double score() const noexcept;
};

/// trace[n] holds the linear powers after iteration n + 1. A channel settles at
/// the first iteration after which every sample stays within tolerance_w of p_ref.
[[nodiscard]] SettlingResult settling_iteration(const std::vector<std::vector<double>>& trace_w,
                                                std::span<const double> reference_w,
                                                double tolerance_w = kSettlingToleranceW);

/// Mean over channels of sum_n |10 log10 psi_i[n]|. trace[n] is the psi vector at iteration n.
[[nodiscard]] double rm_integral(const std::vector<std::vector<double>>& psi_trace);

enum class FlopAlgorithm { Hso, Chso, Gd };

struct FlopModel {
    FlopAlgorithm algorithm = FlopAlgorithm::Chso;
    double channels = 0;            // M
    double parcels = 0;             // K
    double iterations = 0;          // N_f
    double gd_iterations = 0;       // N_f for gradient descent
    double gd_backtracks = 0;       // mean backtracks per gradient-descent iteration
    double route_element_sum = 0;   // sum over channels of ROADM + span counts
};

/// Closed-form operation count of one optimizer run.
[[nodiscard]] double flops(const FlopModel& model);

}  // namespace eonpower
