#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace eonpower {

inline constexpr int kSchemaVersion = 1;

/// Outcome of one optimizer run. Traces hold one entry per iteration, in
/// iteration order; entry n describes the state after iteration n + 1.
struct RunReport {
    std::string algorithm;
    std::uint64_t seed = 0;
    std::vector<std::string> channel_ids;
    std::vector<double> initial_powers_dbm;

    std::vector<std::vector<double>> power_trace_dbm;
    std::vector<double> j1_trace;
    std::vector<double> nmse_trace;               // empty without a reference
    std::vector<std::vector<double>> psi_trace;

    std::vector<double> final_powers_dbm;
    double final_j1 = std::numeric_limits<double>::quiet_NaN();
    double final_nmse = std::numeric_limits<double>::quiet_NaN();
    double max_abs_penalty_db = std::numeric_limits<double>::quiet_NaN();
    bool success = false;

    double flops = 0.0;
    std::size_t iterations = 0;
    std::size_t candidate_evaluations = 0;
    std::size_t eye_evaluations = 0;
    double mean_backtracks = 0.0;
    std::string status = "ok";
};

/// Columns: iteration, j1, nmse, then one p_<channel>_dbm column per channel.
void write_trace_csv(std::ostream& out, const RunReport& report);

/// JSON summary: schema_version, algorithm, seed, final powers, flops, success
/// and the scalar metrics. Traces are left to the CSV.
[[nodiscard]] std::string summary_json(const RunReport& report);

/// Inverse of summary_json for the fields it carries.
[[nodiscard]] RunReport parse_summary_json(const std::string& text);

}  // namespace eonpower
