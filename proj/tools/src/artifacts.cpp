#include "eonpower/experiments.hpp"

#include "eonpower/parallel.hpp"
#include "eonpower/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

namespace eonpower::experiments {

namespace {

using json = nlohmann::ordered_json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string fmt(double v) { return format_number(v); }
std::string fmt(std::size_t v) { return format_number(static_cast<std::int64_t>(v)); }

// Collects the data files of one run, in write order.
class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path root) : root_(std::move(root)) {}

    void write(const std::filesystem::path& relative, const std::string& content) {
        const auto target = root_ / relative;
        std::filesystem::create_directories(target.parent_path());
        std::ofstream out(target, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + target.string() + "'");
        // CSV has no metadata slot, so the version rides in a leading comment row.
        if (relative.extension() == ".csv") out << "# schema_version: " << kSchemaVersion << '\n';
        out << content;
        out.close();
        if (!out) throw std::runtime_error("write to '" + target.string() + "' failed");
        files_.push_back(relative);
        sizes_.push_back(content.size());
    }

    void write_json(const std::filesystem::path& relative, const json& j) { write(relative, j.dump(2) + "\n"); }

    [[nodiscard]] const std::vector<std::filesystem::path>& files() const noexcept { return files_; }
    [[nodiscard]] const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }

private:
    std::filesystem::path root_;
    std::vector<std::filesystem::path> files_;
    std::vector<std::size_t> sizes_;
};

json header(std::string_view experiment) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["experiment"] = experiment;
    return j;
}

struct Distribution {
    double mean = 0, median = 0, p90 = 0, max = 0, min = 0;
};

Distribution distribution(std::vector<double> v) {
    Distribution d;
    if (v.empty()) return d;
    std::sort(v.begin(), v.end());
    double acc = 0.0;
    for (double x : v) acc += x;
    d.mean = acc / static_cast<double>(v.size());
    d.median = v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
    d.p90 = v[std::min(v.size() - 1, static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(v.size()))) - 1)];
    d.min = v.front();
    d.max = v.back();
    return d;
}

json to_json(const Distribution& d) {
    return json{{"mean", number_or_null(d.mean)},
                {"median", number_or_null(d.median)},
                {"p90", number_or_null(d.p90)},
                {"min", number_or_null(d.min)},
                {"max", number_or_null(d.max)}};
}

std::string surface_csv(const Surface& s) {
    std::ostringstream out;
    write_surface_csv(out, s);
    return out.str();
}

std::string trace_csv(const RunReport& r) {
    std::ostringstream out;
    write_trace_csv(out, r);
    return out.str();
}

std::string channels_csv(const Network& network, const std::vector<double>& powers_dbm, const char* column) {
    std::ostringstream out;
    out << csv_row({"channel", column}) << '\n';
    for (std::size_t i = 0; i < powers_dbm.size(); ++i) {
        out << csv_row({network.lightpath(i).route.id, fmt(powers_dbm[i])}) << '\n';
    }
    return out.str();
}

// Columns: iteration, then one column per series; series may differ in length.
std::string series_csv(const std::vector<std::string>& names, const std::vector<std::vector<double>>& series) {
    std::ostringstream out;
    std::vector<std::string> head{"iteration"};
    head.insert(head.end(), names.begin(), names.end());
    out << csv_row(head) << '\n';
    std::size_t rows = 0;
    for (const auto& s : series) rows = std::max(rows, s.size());
    for (std::size_t n = 0; n < rows; ++n) {
        std::vector<std::string> row{fmt(n + 1)};
        for (const auto& s : series) row.push_back(n < s.size() ? fmt(s[n]) : "");
        out << csv_row(row) << '\n';
    }
    return out.str();
}

std::vector<std::string> algorithms_or(const ExperimentPlan& plan, std::vector<std::string> fallback) {
    return plan.algorithms.empty() ? fallback : plan.algorithms;
}

double single_tau(const ExperimentPlan& plan, const Setup& setup) {
    return plan.taus.empty() ? setup.scenario.tau_schedule.front() : plan.taus.front();
}

// =============================================================================
// One writer per experiment
// =============================================================================

void emit_allocate(const ExperimentPlan& plan, const Setup& setup, ArtifactWriter& w) {
    const double tau = single_tau(plan, setup);
    json summary = header("allocate");
    summary["tau_years"] = tau;
    bool reference_written = false;
    for (const auto& algo : algorithms_or(plan, {"chso"})) {
        // A failing seed is recorded and the others still reach disk.
        std::vector<std::optional<RunSummary>> slots(plan.seeds.size());
        std::vector<std::string> errors(plan.seeds.size());
        AllocationResult result;
        result.algorithm = algo;
        result.reference_dbm = reference_powers(setup.network, setup.physical, tau, setup.gd);
        parallel_for(plan.seeds.size(), plan.workers, [&](std::size_t s) {
            try {
                slots[s] = std::move(run_allocation(setup, algo, {plan.seeds[s]}, tau, 1).runs.front());
            } catch (const std::exception& e) {
                errors[s] = e.what();
            }
        });
        std::vector<std::pair<std::uint64_t, std::string>> failures;
        for (std::size_t s = 0; s < slots.size(); ++s) {
            if (slots[s]) {
                result.runs.push_back(std::move(*slots[s]));
            } else {
                failures.emplace_back(plan.seeds[s], errors[s]);
            }
        }
        if (!result.reference_dbm.empty() && !reference_written) {
            w.write("reference.csv", channels_csv(setup.network, result.reference_dbm, "p_star_dbm"));
            reference_written = true;
        }

        std::ostringstream runs;
        runs << csv_row({"seed", "final_j1", "final_nmse", "max_abs_penalty_db", "success", "settling_score",
                         "rm_integral", "flops", "iterations"})
             << '\n';
        std::vector<double> nmse, penalty, settling, rm;
        std::vector<std::vector<double>> nmse_traces, j1_traces;
        std::size_t successes = 0;
        for (const auto& run : result.runs) {
            const RunReport& r = run.report;
            const std::string stem = algo + "/seed_" + std::to_string(r.seed);
            w.write("traces/" + stem + ".csv", trace_csv(r));
            w.write("reports/" + stem + ".json", summary_json(r));
            runs << csv_row({fmt(static_cast<std::size_t>(r.seed)), fmt(r.final_j1), fmt(r.final_nmse),
                             fmt(r.max_abs_penalty_db), r.success ? "1" : "0", fmt(run.settling), fmt(run.rm),
                             fmt(r.flops), fmt(r.iterations)})
                 << '\n';
            nmse.push_back(r.final_nmse);
            penalty.push_back(r.max_abs_penalty_db);
            settling.push_back(run.settling);
            rm.push_back(run.rm);
            nmse_traces.push_back(r.nmse_trace);
            j1_traces.push_back(r.j1_trace);
            successes += r.success;
        }
        w.write("runs_" + algo + ".csv", runs.str());

        // Mean convergence curves over seeds.
        std::vector<double> mean_nmse, mean_j1;
        for (std::size_t n = 0; !nmse_traces.empty() && n < nmse_traces.front().size(); ++n) {
            double a = 0.0, b = 0.0;
            for (std::size_t s = 0; s < nmse_traces.size(); ++s) {
                a += nmse_traces[s][n];
                b += j1_traces[s][n];
            }
            mean_nmse.push_back(a / static_cast<double>(nmse_traces.size()));
            mean_j1.push_back(b / static_cast<double>(nmse_traces.size()));
        }
        w.write("convergence_" + algo + ".csv", series_csv({"mean_nmse", "mean_j1"}, {mean_nmse, mean_j1}));

        json a;
        a["runs"] = result.runs.size();
        a["successes"] = successes;
        a["good_runs"] = result.count_good(1e-3, 1e-2);
        a["final_nmse"] = to_json(distribution(nmse));
        a["max_abs_penalty_db"] = to_json(distribution(penalty));
        a["settling_score"] = to_json(distribution(settling));
        a["rm_integral"] = to_json(distribution(rm));
        json failed = json::array();
        for (const auto& [seed, what] : failures) failed.push_back(json{{"seed", seed}, {"error", what}});
        a["failed_seeds"] = failed;
        summary["algorithms"][algo] = a;
        if (!failures.empty()) {
            w.write_json("summary.json", summary);
            throw std::runtime_error(algo + ": " + std::to_string(failures.size()) + " seed(s) failed, first: seed " +
                                     std::to_string(failures.front().first) + ": " + failures.front().second);
        }
    }
    w.write_json("summary.json", summary);
}

void emit_ipo(const ExperimentPlan& plan, const Setup& setup, ArtifactWriter& w) {
    json summary = header("ipo");
    for (const auto& algo : algorithms_or(plan, {"chso"})) {
        const auto result = run_tuning(setup, algo, plan.workers);
        std::ostringstream hist;
        hist << csv_row({"loop", "parameter", "lower", "upper", "value", "mean_final_j1"}) << '\n';
        for (const auto& s : result.tune.history) {
            hist << csv_row({fmt(s.loop), s.target == TuneTarget::R0 ? "log10_r0" : "omega", fmt(s.lower),
                             fmt(s.upper), fmt(s.value), fmt(s.objective)})
                 << '\n';
        }
        w.write("ipo_history_" + algo + ".csv", hist.str());
        summary["algorithms"][algo] = json{{"r0", result.tune.r0},
                                           {"omega", result.tune.omega},
                                           {"loops", setup.ipo.loops},
                                           {"realizations", setup.ipo.realizations}};
    }
    w.write_json("ipo.json", summary);
}

json band_json(const Surface& ps1, double last_iteration) {
    json band = json::array();
    for (const auto& c : ps1.cells) {
        if (c.second == last_iteration) {
            band.push_back(json{{"r0", c.first}, {"ps", c.probability()}, {"meets_threshold", c.probability() >= kSuccessThreshold}});
        }
    }
    return band;
}

void emit_cpos(const ExperimentPlan& plan, const Setup& setup, ArtifactWriter& w) {
    json summary = header("cpos");
    summary["threshold"] = kSuccessThreshold;
    summary["realizations"] = setup.cpos.realizations;
    for (const auto& algo : algorithms_or(plan, {"chso"})) {
        const auto result = run_cpos(setup, algo, true, plan.workers);
        w.write("ps1_" + algo + ".csv", surface_csv(result.ps1));
        w.write("ps2_" + algo + ".csv", surface_csv(result.ps2));
        const double last = static_cast<double>(setup.optimizer(algo).hurricane.iterations);
        summary["algorithms"][algo] = json{{"ps1_at_budget", band_json(result.ps1, last)}};
    }
    w.write_json("cpos.json", summary);
}

void emit_pareto(const ExperimentPlan& plan, const Setup& setup, ArtifactWriter& w) {
    json summary = header("pareto");
    summary["threshold"] = kSuccessThreshold;
    for (const auto& algo : algorithms_or(plan, {"chso"})) {
        const auto surfaces = run_cpos(setup, algo, true, plan.workers);
        const auto result = pareto_from_surface(setup, algo, surfaces.ps2);
        w.write("ps2_" + algo + ".csv", surface_csv(result.ps2));
        std::ostringstream csv;
        csv << csv_row({"parcels", "iterations", "ps", "flops"}) << '\n';
        json frontier = json::array();
        for (const auto& p : result.frontier) {
            csv << csv_row({fmt(p.parcels), fmt(p.iterations), fmt(p.probability), fmt(p.flops)}) << '\n';
            frontier.push_back(
                json{{"parcels", p.parcels}, {"iterations", p.iterations}, {"ps", p.probability}, {"flops", p.flops}});
        }
        w.write("frontier_" + algo + ".csv", csv.str());
        json a{{"frontier", frontier}};
        if (result.tradeoff) {
            a["tradeoff"] = json{{"parcels", result.tradeoff->parcels},
                                 {"iterations", result.tradeoff->iterations},
                                 {"ps", result.tradeoff->probability},
                                 {"flops", result.tradeoff->flops}};
        } else {
            a["tradeoff"] = nullptr;
        }
        summary["algorithms"][algo] = a;
    }
    w.write_json("pareto.json", summary);
}

void emit_opm_noise(const ExperimentPlan& plan, const Setup& setup, ArtifactWriter& w) {
    Setup local = setup;
    if (!plan.taus.empty()) local.scenario.tau_schedule = {plan.taus.front()};
    json summary = header("opm-noise");
    summary["sigma_db"] = local.scenario.monitoring.sigma_db;
    summary["mu_db"] = local.scenario.monitoring.mu_db;
    summary["redraw"] = local.scenario.monitoring.redraw == NoiseRedraw::Iteration ? "iteration" : "evaluation";
    std::vector<std::string> names;
    std::vector<std::vector<double>> series;
    for (const auto& algo : algorithms_or(plan, {"chso", "hso"})) {
        const auto result = run_opm_noise(local, algo, plan.seeds, plan.workers);
        names.push_back("mean_nmse_" + algo);
        series.push_back(result.mean_nmse_trace);

        std::ostringstream runs;
        std::vector<std::string> head{"seed", "final_nmse"};
        for (const auto& lp : local.network.lightpaths()) head.push_back("penalty_" + lp.route.id + "_db");
        runs << csv_row(head) << '\n';
        for (std::size_t s = 0; s < plan.seeds.size(); ++s) {
            std::vector<std::string> row{fmt(static_cast<std::size_t>(plan.seeds[s])), fmt(result.final_nmse[s])};
            for (double p : result.penalty_db[s]) row.push_back(fmt(p));
            runs << csv_row(row) << '\n';
        }
        w.write("opm_runs_" + algo + ".csv", runs.str());
        summary["algorithms"][algo] = json{{"mean_final_nmse", result.mean_final_nmse()},
                                           {"max_mean_penalty_db", result.max_mean_penalty_db()}};
    }
    w.write("opm_nmse.csv", series_csv(names, series));
    w.write_json("opm.json", summary);
}

void emit_ageing(const ExperimentPlan& plan, const Setup& setup, ArtifactWriter& w) {
    const std::vector<double> taus = plan.taus.empty() ? setup.scenario.tau_schedule : plan.taus;
    json summary = header("ageing");
    std::ostringstream csv;
    csv << csv_row({"algorithm", "tau_years", "mean_penalty_db", "std_penalty_db", "lower_band_db"}) << '\n';
    for (const auto& algo : algorithms_or(plan, {"chso", "hso"})) {
        const auto result = run_ageing(setup, algo, plan.seeds, taus, plan.workers);
        for (const auto& p : result.points) {
            csv << csv_row({algo, fmt(p.tau_years), fmt(p.mean_penalty_db), fmt(p.std_penalty_db),
                            fmt(result.lower_band_db)})
                << '\n';
        }
        summary["algorithms"][algo] = json{{"crosses_lower_band", result.crosses_lower_band()},
                                           {"lower_band_db", result.lower_band_db}};
    }
    w.write("ageing.csv", csv.str());
    w.write_json("ageing.json", summary);
}

void emit_perturbation(const ExperimentPlan& plan, const Setup& setup, ArtifactWriter& w) {
    json summary = header("perturbation");
    std::vector<std::string> names;
    std::vector<std::vector<double>> series;
    for (const auto& algo : algorithms_or(plan, {"chso", "hso", "none"})) {
        const auto result = run_perturbation(setup, algo, plan.seeds, plan.workers);
        names.push_back("mean_nmse_" + algo);
        series.push_back(result.mean_nmse_trace);
        summary["algorithms"][algo] = json{{"runs", result.final_nmse.size()},
                                           {"mean_final_nmse", number_or_null(result.mean_final_nmse())}};
    }
    w.write("perturbation_nmse.csv", series_csv(names, series));
    w.write_json("perturbation.json", summary);
}

void emit_complexity(const ExperimentPlan& plan, const Setup& setup, ArtifactWriter& w) {
    const std::vector<std::string> scenarios =
        plan.scenarios.empty() ? std::vector<std::string>{"A", "B", "C"} : plan.scenarios;
    const auto result = run_complexity(setup, scenarios);
    std::ostringstream csv;
    csv << csv_row({"scenario", "channels", "algorithm", "parcels", "iterations", "flops", "mflops"}) << '\n';
    for (const auto& r : result.rows) {
        csv << csv_row({r.scenario, fmt(r.channels), r.algorithm, fmt(r.parcels), fmt(r.iterations), fmt(r.flops),
                        fmt(r.flops / 1e6)})
            << '\n';
    }
    w.write("complexity.csv", csv.str());
    json summary = header("complexity");
    summary["gd_iterations"] = result.gd_iterations;
    summary["gd_mean_backtracks"] = result.gd_backtracks;
    for (const char* algo : {"chso", "hso", "gd"}) summary["loglog_slope"][algo] = number_or_null(result.loglog_slope(algo));
    w.write_json("complexity.json", summary);
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

}  // namespace

std::vector<std::filesystem::path> run(const ExperimentPlan& plan) {
    plan.validate();
    const Setup setup = load_setup_file(plan.config, plan.overrides);
    std::error_code ec;
    std::filesystem::create_directories(plan.out, ec);
    if (ec) throw PlanError("cannot create output directory '" + plan.out.string() + "': " + ec.message());

    ArtifactWriter writer(plan.out);
    const auto started = utc_timestamp();
    std::exception_ptr failure;
    try {
        if (plan.experiment == "allocate") emit_allocate(plan, setup, writer);
        if (plan.experiment == "ipo") emit_ipo(plan, setup, writer);
        if (plan.experiment == "cpos") emit_cpos(plan, setup, writer);
        if (plan.experiment == "pareto") emit_pareto(plan, setup, writer);
        if (plan.experiment == "opm-noise") emit_opm_noise(plan, setup, writer);
        if (plan.experiment == "ageing") emit_ageing(plan, setup, writer);
        if (plan.experiment == "perturbation") emit_perturbation(plan, setup, writer);
        if (plan.experiment == "complexity") emit_complexity(plan, setup, writer);
    } catch (...) {
        failure = std::current_exception();
    }

    // Timestamps live only here so the data files stay byte-stable.
    json manifest = header(plan.experiment);
    manifest["started_utc"] = started;
    manifest["finished_utc"] = utc_timestamp();
    manifest["complete"] = !failure;
    manifest["config"] = plan.config.string();
    manifest["overrides"] = plan.overrides;
    manifest["algorithms"] = plan.algorithms;
    manifest["seeds"] = plan.seeds;
    manifest["taus"] = plan.taus;
    manifest["scenarios"] = plan.scenarios;
    json files = json::array();
    for (std::size_t i = 0; i < writer.files().size(); ++i) {
        files.push_back(json{{"path", writer.files()[i].generic_string()}, {"bytes", writer.sizes()[i]}});
    }
    manifest["files"] = files;
    std::ofstream(plan.out / "manifest.json", std::ios::binary | std::ios::trunc) << manifest.dump(2) << "\n";

    if (failure) std::rethrow_exception(failure);
    return writer.files();
}

}  // namespace eonpower::experiments
