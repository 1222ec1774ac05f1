#include "eonpower/experiments.hpp"

#include "eonpower/parallel.hpp"
#include "eonpower/units.hpp"

#include <cmath>
#include <numeric>

namespace eonpower::experiments {

namespace {

ScenarioSpec static_spec(const ScenarioSpec& base, std::vector<double> taus) {
    ScenarioSpec spec = base;
    spec.perturbation.enabled = false;
    spec.drops.clear();
    spec.tau_schedule = std::move(taus);
    return spec;
}

OptimizerChoice seeded(const Setup& setup, std::string_view algorithm, std::uint64_t seed) {
    OptimizerChoice c = setup.optimizer(algorithm);
    c.hurricane.seed = seed;
    return c;
}

double mean_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Element-wise mean of equally long traces.
std::vector<double> mean_trace(const std::vector<std::vector<double>>& traces) {
    if (traces.empty()) return {};
    std::vector<double> out(traces.front().size(), 0.0);
    for (const auto& t : traces) {
        for (std::size_t n = 0; n < out.size(); ++n) out[n] += t[n];
    }
    for (double& v : out) v /= static_cast<double>(traces.size());
    return out;
}

}  // namespace

std::size_t AllocationResult::count_good(double nmse_max, double penalty_max_db) const {
    return static_cast<std::size_t>(std::count_if(runs.begin(), runs.end(), [&](const RunSummary& r) {
        return r.report.final_nmse <= nmse_max && r.report.max_abs_penalty_db <= penalty_max_db;
    }));
}

AllocationResult run_allocation(const Setup& setup, std::string_view algorithm, const std::vector<std::uint64_t>& seeds,
                                double tau_years, std::size_t workers) {
    AllocationResult result;
    result.algorithm = std::string(algorithm);
    result.tau_years = tau_years;
    const ScenarioSpec spec = static_spec(setup.scenario, {tau_years});
    result.reference_dbm = reference_powers(setup.network, setup.physical, tau_years, setup.gd);
    const auto ref_w = dbm_to_watts(result.reference_dbm);

    result.runs.resize(seeds.size());
    parallel_for(seeds.size(), workers, [&](std::size_t s) {
        auto scenario = run_scenario(setup.network, setup.physical, seeded(setup, algorithm, seeds[s]), spec);
        RunSummary& summary = result.runs[s];
        summary.report = std::move(scenario.points.front().report);
        summary.report.seed = seeds[s];
        std::vector<std::vector<double>> trace_w;
        trace_w.reserve(summary.report.power_trace_dbm.size());
        for (const auto& p : summary.report.power_trace_dbm) trace_w.push_back(dbm_to_watts(p));
        summary.settling = settling_iteration(trace_w, ref_w).score();
        summary.rm = rm_integral(summary.report.psi_trace);
    });
    return result;
}

TuningResult run_tuning(const Setup& setup, std::string_view algorithm, std::size_t workers) {
    const OptimizerChoice choice = setup.optimizer(algorithm);
    if (choice.kind != OptimizerKind::Chso && choice.kind != OptimizerKind::Hso) {
        throw PlanError("parameter tuning needs chso or hso");
    }
    const QotEvaluator qot(setup.network, setup.physical, setup.scenario.tau_schedule.front());
    IpoConfig config = setup.ipo;
    config.workers = workers;
    return {std::string(algorithm), tune(qot, choice.hurricane, flat_start(setup.network), config)};
}

CposResult run_cpos(const Setup& setup, std::string_view algorithm, bool with_ps2, std::size_t workers) {
    const OptimizerChoice choice = setup.optimizer(algorithm);
    if (choice.kind != OptimizerKind::Chso && choice.kind != OptimizerKind::Hso) {
        throw PlanError("success-probability surfaces need chso or hso");
    }
    const QotEvaluator qot(setup.network, setup.physical, setup.scenario.tau_schedule.front());
    const auto p0 = flat_start(setup.network);
    const CposGrid& grid = setup.cpos;

    CposResult result;
    result.algorithm = std::string(algorithm);
    std::vector<std::size_t> checkpoints;
    for (std::size_t n = 0; n <= choice.hurricane.iterations; n += grid.iteration_step) checkpoints.push_back(n);
    if (checkpoints.back() != choice.hurricane.iterations) checkpoints.push_back(choice.hurricane.iterations);
    result.ps1 = cpos_ps1(qot, choice.hurricane, p0, grid.r0_values, checkpoints, grid.realizations, 1, workers);

    if (with_ps2) {
        std::vector<std::size_t> parcels;
        for (std::size_t w : grid.parcel_factors) parcels.push_back(w * setup.network.size());
        result.ps2 = cpos_ps2(qot, choice.hurricane, p0, parcels, grid.budgets, grid.realizations, 1, workers);
    }
    return result;
}

ParetoResult pareto_from_surface(const Setup& setup, std::string_view algorithm, Surface ps2) {
    const OptimizerChoice choice = setup.optimizer(algorithm);
    ParetoResult result;
    result.algorithm = std::string(algorithm);
    FlopModel model;
    model.algorithm = choice.kind == OptimizerKind::Hso ? FlopAlgorithm::Hso : FlopAlgorithm::Chso;
    model.channels = static_cast<double>(setup.network.size());
    model.route_element_sum = static_cast<double>(setup.network.route_element_sum());
    result.frontier = pareto_frontier(ps2, model);
    if (!result.frontier.empty()) result.tradeoff = select_tradeoff(result.frontier);
    result.ps2 = std::move(ps2);
    return result;
}

double NoiseResult::max_mean_penalty_db() const {
    if (penalty_db.empty()) return 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < penalty_db.front().size(); ++i) {
        double acc = 0.0;
        for (const auto& row : penalty_db) acc += row[i];
        worst = std::max(worst, std::abs(acc / static_cast<double>(penalty_db.size())));
    }
    return worst;
}

double NoiseResult::mean_final_nmse() const { return mean_of(final_nmse); }

NoiseResult run_opm_noise(const Setup& setup, std::string_view algorithm, const std::vector<std::uint64_t>& seeds,
                          std::size_t workers) {
    ScenarioSpec spec = static_spec(setup.scenario, {setup.scenario.tau_schedule.front()});
    spec.monitoring.kind = MonitoringKind::LogNormal;

    NoiseResult result;
    result.algorithm = std::string(algorithm);
    std::vector<std::vector<double>> traces(seeds.size());
    result.penalty_db.resize(seeds.size());
    result.final_nmse.resize(seeds.size());
    parallel_for(seeds.size(), workers, [&](std::size_t s) {
        auto scenario = run_scenario(setup.network, setup.physical, seeded(setup, algorithm, seeds[s]), spec);
        auto& point = scenario.points.front();
        traces[s] = std::move(point.report.nmse_trace);
        result.penalty_db[s] = std::move(point.penalty_db);
        result.final_nmse[s] = point.report.final_nmse;
    });
    result.mean_nmse_trace = mean_trace(traces);
    return result;
}

bool AgeingResult::crosses_lower_band() const {
    return std::any_of(points.begin(), points.end(),
                       [&](const AgeingPoint& p) { return p.mean_penalty_db < lower_band_db; });
}

AgeingResult run_ageing(const Setup& setup, std::string_view algorithm, const std::vector<std::uint64_t>& seeds,
                        const std::vector<double>& taus, std::size_t workers) {
    const ScenarioSpec spec = static_spec(setup.scenario, taus);
    const std::vector<std::uint64_t> used =
        algorithm == "none" ? std::vector<std::uint64_t>{seeds.front()} : seeds;

    // run_penalty[s][t]: mean over channels of the final penalty.
    std::vector<std::vector<double>> run_penalty(used.size());
    parallel_for(used.size(), workers, [&](std::size_t s) {
        const auto scenario = run_scenario(setup.network, setup.physical, seeded(setup, algorithm, used[s]), spec);
        for (const auto& point : scenario.points) run_penalty[s].push_back(mean_of(point.penalty_db));
    });

    AgeingResult result;
    result.algorithm = std::string(algorithm);
    result.lower_band_db = 10.0 * std::log10(1.0 - setup.physical.lambda1);
    for (std::size_t t = 0; t < taus.size(); ++t) {
        std::vector<double> samples;
        for (const auto& row : run_penalty) samples.push_back(row[t]);
        AgeingPoint point;
        point.tau_years = taus[t];
        point.mean_penalty_db = mean_of(samples);
        double var = 0.0;
        for (double v : samples) var += (v - point.mean_penalty_db) * (v - point.mean_penalty_db);
        point.std_penalty_db = samples.size() > 1 ? std::sqrt(var / static_cast<double>(samples.size() - 1)) : 0.0;
        result.points.push_back(point);
    }
    return result;
}

double DropResult::mean_final_nmse() const { return mean_of(final_nmse); }

DropResult run_perturbation(const Setup& setup, std::string_view algorithm, const std::vector<std::uint64_t>& seeds,
                            std::size_t workers) {
    if (!setup.scenario.dynamic()) throw PlanError("the configuration has no perturbation or drop events");
    const std::vector<std::uint64_t> used =
        algorithm == "none" ? std::vector<std::uint64_t>{seeds.front()} : seeds;

    DropResult result;
    result.algorithm = std::string(algorithm);
    std::vector<std::vector<double>> traces(used.size());
    result.final_nmse.resize(used.size());
    parallel_for(used.size(), workers, [&](std::size_t s) {
        auto scenario =
            run_scenario(setup.network, setup.physical, seeded(setup, algorithm, used[s]), setup.scenario);
        auto& report = scenario.points.front().report;
        result.final_nmse[s] = report.final_nmse;
        traces[s] = std::move(report.nmse_trace);
    });
    result.mean_nmse_trace = mean_trace(traces);
    return result;
}

std::size_t scenario_copies(std::string_view scenario) {
    if (scenario == "A") return 1;
    if (scenario == "B") return 10;
    if (scenario == "C") return 20;
    throw PlanError("unknown scenario '" + std::string(scenario) + "'");
}

double ComplexityResult::loglog_slope(std::string_view algorithm) const {
    std::vector<double> x, y;
    for (const auto& r : rows) {
        if (r.algorithm != algorithm) continue;
        x.push_back(std::log(static_cast<double>(r.channels)));
        y.push_back(std::log(r.flops));
    }
    if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

ComplexityResult run_complexity(const Setup& setup, const std::vector<std::string>& scenarios) {
    ComplexityResult result;
    // Gradient-descent iteration and backtrack counts come from the base network
    // and are held fixed so the table isolates the dependence on M.
    const QotEvaluator qot(setup.network, setup.physical, setup.scenario.tau_schedule.front());
    const RunReport gd = optimize_gd(qot, setup.gd, flat_start(setup.network));
    result.gd_iterations = static_cast<double>(gd.iterations);
    result.gd_backtracks = gd.mean_backtracks;

    for (const auto& name : scenarios) {
        const Network net = replicate(setup.network, scenario_copies(name), setup.physical.carrier_hz);
        const double m = static_cast<double>(net.size());
        const double sigma = static_cast<double>(net.route_element_sum());
        const auto add = [&](const char* algo, FlopModel model, double parcels, double iterations) {
            result.rows.push_back({name, net.size(), algo, parcels, iterations, flops(model)});
        };
        const auto& c = setup.chso;
        const auto& h = setup.hso;
        add("chso", {FlopAlgorithm::Chso, m, double(c.parcels), double(c.iterations), 0, 0, sigma}, double(c.parcels),
            double(c.iterations));
        add("hso", {FlopAlgorithm::Hso, m, double(h.parcels), double(h.iterations), 0, 0, sigma}, double(h.parcels),
            double(h.iterations));
        add("gd", {FlopAlgorithm::Gd, m, 0, 0, result.gd_iterations, result.gd_backtracks, sigma}, 0.0,
            result.gd_iterations);
    }
    return result;
}

}  // namespace eonpower::experiments
