#pragma once

#include "eonpower/qot.hpp"
#include "eonpower/run_report.hpp"

#include <optional>
#include <span>
#include <vector>

namespace eonpower {

struct GdParams {
    std::size_t max_iterations = 5000;
    double sufficient_decrease = 1e-4;   // Armijo coefficient
    double shrink = 0.5;
    double gradient_tolerance = 1e-9;
    double fd_step_db = 1e-5;
    double objective_tolerance = 1e-12;  // stop once J1 falls below this
    double initial_step_db = 1.0;
    double min_step_db = 1e-13;          // line search gives up below this step
    std::size_t max_backtracks = 80;

    void validate() const;
};

/// Finite-difference gradient of J1 with respect to powers in dBm. Central
/// differences inside the box, one-sided within step of a bound.
[[nodiscard]] std::vector<double> gradient_j1(const QotEvaluator& qot, std::span<const double> powers_dbm,
                                              double step_db = 1e-5);

/// -g / ||g||; zero vector when g is zero.
[[nodiscard]] std::vector<double> descent_direction(std::span<const double> gradient);

/// Projected gradient descent with Armijo backtracking. Status is one of
/// "gradient_tolerance", "objective_tolerance", "line_search_stall", "max_iterations".
[[nodiscard]] RunReport optimize_gd(const QotEvaluator& qot, const GdParams& params, std::span<const double> p0_dbm,
                                    std::optional<std::span<const double>> reference_dbm = std::nullopt);

}  // namespace eonpower
