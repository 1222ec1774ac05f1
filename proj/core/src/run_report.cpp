#include "eonpower/run_report.hpp"

#include "eonpower/text.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <ostream>

namespace eonpower {

namespace {

using nlohmann::json;

// JSON has no NaN; missing metrics are written as null.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

void write_trace_csv(std::ostream& out, const RunReport& r) {
    std::vector<std::string> header{"iteration", "j1", "nmse"};
    for (const auto& id : r.channel_ids) header.push_back("p_" + id + "_dbm");
    out << csv_row(header) << '\n';
    for (std::size_t n = 0; n < r.power_trace_dbm.size(); ++n) {
        std::vector<std::string> row{format_number(static_cast<std::int64_t>(n + 1)),
                                     n < r.j1_trace.size() ? format_number(r.j1_trace[n]) : "",
                                     n < r.nmse_trace.size() ? format_number(r.nmse_trace[n]) : ""};
        const auto& p = r.power_trace_dbm[n];
        for (std::size_t i = 0; i < r.channel_ids.size(); ++i) {
            row.push_back(i < p.size() ? format_number(p[i]) : "");
        }
        out << csv_row(row) << '\n';
    }
}

std::string summary_json(const RunReport& r) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["algorithm"] = r.algorithm;
    j["seed"] = r.seed;
    j["channel_ids"] = r.channel_ids;
    j["final_powers_dbm"] = r.final_powers_dbm;
    j["final_j1"] = number_or_null(r.final_j1);
    j["final_nmse"] = number_or_null(r.final_nmse);
    j["max_abs_penalty_db"] = number_or_null(r.max_abs_penalty_db);
    j["success"] = r.success;
    j["flops"] = r.flops;
    j["iterations"] = r.iterations;
    j["candidate_evaluations"] = r.candidate_evaluations;
    j["eye_evaluations"] = r.eye_evaluations;
    j["mean_backtracks"] = r.mean_backtracks;
    j["status"] = r.status;
    return j.dump(2) + "\n";
}

RunReport parse_summary_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.at("schema_version").get<int>() != kSchemaVersion) {
        throw std::runtime_error("unsupported schema_version");
    }
    RunReport r;
    r.algorithm = j.at("algorithm").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.channel_ids = j.at("channel_ids").get<std::vector<std::string>>();
    r.final_powers_dbm = j.at("final_powers_dbm").get<std::vector<double>>();
    r.final_j1 = number_from(j.at("final_j1"));
    r.final_nmse = number_from(j.at("final_nmse"));
    r.max_abs_penalty_db = number_from(j.at("max_abs_penalty_db"));
    r.success = j.at("success").get<bool>();
    r.flops = j.at("flops").get<double>();
    r.iterations = j.at("iterations").get<std::size_t>();
    r.candidate_evaluations = j.at("candidate_evaluations").get<std::size_t>();
    r.eye_evaluations = j.at("eye_evaluations").get<std::size_t>();
    r.mean_backtracks = j.at("mean_backtracks").get<double>();
    r.status = j.at("status").get<std::string>();
    return r;
}

}  // namespace eonpower
