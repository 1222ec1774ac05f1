#include "eonpower/scenarios.hpp"

#include "eonpower/metrics.hpp"
#include "eonpower/units.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>

namespace eonpower {

void ScenarioSpec::validate(const PhysicalParams& params) const {
    if (monitoring.sigma_db < 0.0) throw ConfigError("scenario.monitoring.sigma_db", "must be non-negative");
    if (tau_schedule.empty()) throw ConfigError("scenario.tau_schedule", "must not be empty");
    for (double t : tau_schedule) {
        if (t < params.tau0_years || t > params.tau_end_years) {
            throw ConfigError("scenario.tau_schedule", "entries must lie within the network lifetime");
        }
    }
    if (perturbation.enabled) {
        if (perturbation.period <= 0) throw ConfigError("scenario.perturbation.period", "must be positive");
        if (perturbation.end < perturbation.start) throw ConfigError("scenario.perturbation.end", "must not precede start");
    }
    if (dynamic() && dynamic_iterations == 0) throw ConfigError("scenario.dynamic_iterations", "must be positive");
    for (std::size_t i = 0; i < drops.size(); ++i) {
        if (drops[i].iteration >= dynamic_iterations) {
            throw ConfigError("scenario.drops[" + std::to_string(i) + "].iteration", "must be below dynamic_iterations");
        }
    }
}

namespace {

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : -1; }

template <typename T>
T get_or(const YAML::Node& parent, const char* key, const std::string& path, T fallback) {
    const YAML::Node n = parent[key];
    if (!n) return fallback;
    try {
        return n.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(path + "." + key, "wrong type", line_of(n));
    }
}

}  // namespace

ScenarioSpec parse_scenario(std::string_view document) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(document));
    } catch (const YAML::ParserException& e) {
        throw ConfigError("<document>", e.msg, e.mark.line >= 0 ? e.mark.line + 1 : -1);
    }
    ScenarioSpec spec;
    const YAML::Node s = root["scenario"];
    if (!s) return spec;
    const std::string path = "scenario";

    if (const YAML::Node m = s["monitoring"]) {
        const std::string mp = path + ".monitoring";
        const auto kind = get_or<std::string>(m, "kind", mp, "perfect");
        if (kind == "perfect") {
            spec.monitoring.kind = MonitoringKind::Perfect;
        } else if (kind == "lognormal") {
            spec.monitoring.kind = MonitoringKind::LogNormal;
        } else {
            throw ConfigError(mp + ".kind", "expected 'perfect' or 'lognormal'", line_of(m["kind"]));
        }
        spec.monitoring.mu_db = get_or(m, "mu_db", mp, spec.monitoring.mu_db);
        spec.monitoring.sigma_db = get_or(m, "sigma_db", mp, spec.monitoring.sigma_db);
        const auto redraw = get_or<std::string>(m, "redraw", mp, "evaluation");
        if (redraw == "evaluation") {
            spec.monitoring.redraw = NoiseRedraw::Evaluation;
        } else if (redraw == "iteration") {
            spec.monitoring.redraw = NoiseRedraw::Iteration;
        } else {
            throw ConfigError(mp + ".redraw", "expected 'evaluation' or 'iteration'", line_of(m["redraw"]));
        }
    }
    spec.tau_schedule = get_or(s, "tau_schedule", path, spec.tau_schedule);

    if (const YAML::Node p = s["perturbation"]) {
        const std::string pp = path + ".perturbation";
        const auto kind = get_or<std::string>(p, "kind", pp, "off");
        if (kind != "off" && kind != "sine") throw ConfigError(pp + ".kind", "expected 'off' or 'sine'", line_of(p["kind"]));
        spec.perturbation.enabled = kind == "sine";
        spec.perturbation.amplitude_db = get_or(p, "amplitude_db", pp, spec.perturbation.amplitude_db);
        spec.perturbation.period = get_or(p, "period", pp, spec.perturbation.period);
        spec.perturbation.start = get_or(p, "start", pp, spec.perturbation.start);
        spec.perturbation.end = get_or(p, "end", pp, spec.perturbation.end);
        spec.perturbation.node = get_or(p, "node", pp, spec.perturbation.node);
        const auto envelope = get_or<std::string>(p, "envelope", pp, "geometric");
        if (envelope == "geometric") {
            spec.perturbation.envelope = PerturbationEnvelope::Geometric;
        } else if (envelope == "constant") {
            spec.perturbation.envelope = PerturbationEnvelope::Constant;
        } else {
            throw ConfigError(pp + ".envelope", "expected 'geometric' or 'constant'", line_of(p["envelope"]));
        }
    }
    if (const YAML::Node d = s["drops"]) {
        if (!d.IsSequence()) throw ConfigError(path + ".drops", "expected a list", line_of(d));
        for (std::size_t i = 0; i < d.size(); ++i) {
            const std::string dp = path + ".drops[" + std::to_string(i) + "]";
            DropEvent ev;
            ev.route = get_or<std::string>(d[i], "route", dp, "");
            if (ev.route.empty()) throw ConfigError(dp + ".route", "missing value", line_of(d[i]));
            ev.iteration = get_or<std::size_t>(d[i], "iteration", dp, 0);
            spec.drops.push_back(ev);
        }
    }
    spec.dynamic_iterations = get_or(s, "dynamic_iterations", path, spec.dynamic_iterations);
    return spec;
}

double noisy_snr(double true_snr, double mu_db, double sigma_db, std::mt19937_64& rng) {
    if (sigma_db == 0.0) return true_snr * db_to_linear(mu_db);
    std::normal_distribution<double> x(mu_db, sigma_db);
    return true_snr * db_to_linear(x(rng));
}

double perturbation(std::size_t n, const PerturbationSpec& spec) {
    if (!spec.enabled || n <= spec.start || n > spec.end) return 0.0;
    const std::size_t m = n - spec.start;
    double wave = 0.0;
    if (spec.period == 4) {
        // Exact samples of sin(m*pi/2).
        constexpr double kQuarter[4] = {0.0, 1.0, 0.0, -1.0};
        wave = kQuarter[m % 4];
    } else {
        wave = std::sin(2.0 * kPi * static_cast<double>(m) / spec.period);
    }
    const double envelope = spec.envelope == PerturbationEnvelope::Geometric
                                ? std::pow(spec.amplitude_db, static_cast<double>(m))
                                : spec.amplitude_db;
    return envelope * wave;
}

OptimizerChoice OptimizerChoice::from_name(std::string_view name) {
    OptimizerChoice c;
    if (name == "chso") {
        c.kind = OptimizerKind::Chso;
        c.hurricane = HurricaneParams::chso();
    } else if (name == "hso") {
        c.kind = OptimizerKind::Hso;
        c.hurricane = HurricaneParams::hso();
    } else if (name == "gd") {
        c.kind = OptimizerKind::Gd;
    } else if (name == "none") {
        c.kind = OptimizerKind::None;
    } else {
        throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
    }
    return c;
}

std::string OptimizerChoice::name() const {
    switch (kind) {
        case OptimizerKind::Chso: return "chso";
        case OptimizerKind::Hso: return "hso";
        case OptimizerKind::Gd: return "gd";
        case OptimizerKind::None: return "none";
    }
    return "none";
}

std::vector<double> reference_powers(const Network& network, const PhysicalParams& params, double tau_years,
                                     const GdParams& gd) {
    const QotEvaluator qot(network, params, tau_years);
    const std::vector<double> flat(network.size(), 0.0);
    return optimize_gd(qot, gd, flat).final_powers_dbm;
}

namespace {

// Pressure as seen through the performance monitors.
class MonitoredPressure {
public:
    MonitoredPressure(const QotEvaluator& qot, const MonitoringSpec& spec, std::uint64_t seed)
        : qot_(&qot), spec_(spec), rng_(seed ^ 0x9E3779B97F4A7C15ULL) {}

    void set_evaluator(const QotEvaluator& qot) { qot_ = &qot; }
    void set_offset(std::vector<double> offset_db) { offset_ = std::move(offset_db); }

    /// Draws this iteration's monitor errors when they are held per iteration.
    void begin_iteration() {
        if (spec_.kind != MonitoringKind::LogNormal || spec_.redraw != NoiseRedraw::Iteration) return;
        held_.resize(qot_->size());
        for (double& f : held_) f = noisy_snr(1.0, spec_.mu_db, spec_.sigma_db, rng_);
    }

    PressureSample operator()(std::span<const double> p_dbm) {
        std::vector<double> p(p_dbm.begin(), p_dbm.end());
        for (std::size_t i = 0; i < offset_.size() && i < p.size(); ++i) p[i] += offset_[i];
        auto psi = qot_->psi_dbm(p);
        if (spec_.kind == MonitoringKind::LogNormal) {
            if (spec_.redraw == NoiseRedraw::Iteration) {
                if (held_.size() != psi.size()) begin_iteration();
                for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= held_[i];
            } else {
                for (double& v : psi) v = noisy_snr(v, spec_.mu_db, spec_.sigma_db, rng_);
            }
        }
        return {objective_j1(psi), margin_shortfall(psi, qot_->params().lambda1)};
    }

private:
    const QotEvaluator* qot_;
    MonitoringSpec spec_;
    std::mt19937_64 rng_;
    std::vector<double> offset_;
    std::vector<double> held_;     // per-channel SNR factors for the current iteration
};

ScenarioResult run_static(const Network& network, const PhysicalParams& params, const OptimizerChoice& optimizer,
                          const ScenarioSpec& spec, std::span<const double> p0) {
    ScenarioResult result;
    for (double tau : spec.tau_schedule) {
        const QotEvaluator qot(network, params, tau);
        ScenarioPoint point;
        point.tau_years = tau;
        point.reference_dbm = reference_powers(network, params, tau, optimizer.gd);
        const std::span<const double> ref(point.reference_dbm);
        switch (optimizer.kind) {
            case OptimizerKind::Chso:
            case OptimizerKind::Hso:
                if (spec.monitoring.kind == MonitoringKind::Perfect) {
                    point.report = optimize(qot, optimizer.hurricane, p0, ref);
                } else {
                    MonitoredPressure monitored(qot, spec.monitoring, optimizer.hurricane.seed);
                    const PressureFn pressure = [&monitored](std::span<const double> p) { return monitored(p); };
                    point.report = optimize_with(qot, optimizer.hurricane, p0, pressure, ref,
                                                 [&monitored](std::size_t) { monitored.begin_iteration(); });
                }
                break;
            case OptimizerKind::Gd:
                if (spec.monitoring.kind != MonitoringKind::Perfect) {
                    throw std::invalid_argument("gradient descent runs on perfect monitoring only");
                }
                point.report = optimize_gd(qot, optimizer.gd, p0, ref);
                break;
            case OptimizerKind::None: {
                RunReport r;
                r.algorithm = "none";
                r.initial_powers_dbm.assign(p0.begin(), p0.end());
                r.final_powers_dbm = r.initial_powers_dbm;
                finish_report(r, qot, ref);
                point.report = std::move(r);
                break;
            }
        }
        point.penalty_db = power_penalty(dbm_to_watts(point.report.final_powers_dbm), dbm_to_watts(point.reference_dbm));
        result.points.push_back(std::move(point));
    }
    return result;
}

ScenarioResult run_dynamic(const Network& network, const PhysicalParams& params, const OptimizerChoice& optimizer,
                           const ScenarioSpec& spec, std::span<const double> p0) {
    if (optimizer.kind == OptimizerKind::Gd) {
        throw std::invalid_argument("gradient descent has no dynamic mode; use chso, hso or none");
    }
    const double tau = spec.tau_schedule.front();

    // Channels still present at the end, as indices into the full network.
    std::vector<bool> dropped(network.size(), false);
    for (const auto& d : spec.drops) {
        const auto idx = network.find(d.route);
        if (!idx) throw std::invalid_argument("cannot drop unknown route '" + d.route + "'");
        dropped[*idx] = true;
    }
    std::vector<std::size_t> survivors;
    for (std::size_t i = 0; i < network.size(); ++i) {
        if (!dropped[i]) survivors.push_back(i);
    }
    if (survivors.size() < 2) throw std::invalid_argument("dynamic scenario needs at least two surviving channels");

    const QotEvaluator full_qot(network, params, tau);
    const std::vector<double> pre_drop = optimize_gd(full_qot, optimizer.gd, p0).final_powers_dbm;

    const Network final_net = network.subset(survivors);
    const QotEvaluator final_qot(final_net, params, tau);
    std::vector<double> start_survivors;
    for (std::size_t i : survivors) start_survivors.push_back(pre_drop[i]);
    ScenarioPoint point;
    point.tau_years = tau;
    point.reference_dbm = optimize_gd(final_qot, optimizer.gd, start_survivors).final_powers_dbm;
    const auto ref_w = dbm_to_watts(point.reference_dbm);

    // Live channel set, as indices into the full network, and commanded powers.
    std::vector<std::size_t> live(network.size());
    for (std::size_t i = 0; i < live.size(); ++i) live[i] = i;
    std::vector<double> commanded = pre_drop;
    auto live_qot = std::make_unique<QotEvaluator>(full_qot);

    const bool searching = optimizer.kind != OptimizerKind::None;
    std::optional<HurricaneSearch> search;
    if (searching) {
        search.emplace(optimizer.hurricane, params.p_min_dbm, params.p_max_dbm);
        search->init(commanded);
    }
    MonitoredPressure monitored(*live_qot, spec.monitoring, optimizer.hurricane.seed);
    const PressureFn pressure = [&monitored](std::span<const double> p) { return monitored(p); };

    RunReport& report = point.report;
    report.algorithm = optimizer.name();
    report.seed = optimizer.hurricane.seed;
    report.initial_powers_dbm = start_survivors;
    for (std::size_t i : survivors) report.channel_ids.push_back(network.lightpath(i).route.id);

    std::vector<bool> applied_drop(spec.drops.size(), false);
    for (std::size_t n = 1; n <= spec.dynamic_iterations; ++n) {
        bool changed = false;
        for (std::size_t d = 0; d < spec.drops.size(); ++d) {
            if (applied_drop[d] || spec.drops[d].iteration >= n) continue;
            applied_drop[d] = true;
            const std::size_t full_idx = *network.find(spec.drops[d].route);
            const auto pos = std::find(live.begin(), live.end(), full_idx) - live.begin();
            live.erase(live.begin() + pos);
            commanded.erase(commanded.begin() + pos);
            changed = true;
        }
        if (changed) {
            live_qot = std::make_unique<QotEvaluator>(network.subset(live), params, tau);
            monitored.set_evaluator(*live_qot);
            if (search) search->reset_dimension(commanded);
        }

        const double pert = perturbation(n, spec.perturbation);
        std::vector<double> offset(live.size(), 0.0);
        for (std::size_t i = 0; i < live.size(); ++i) {
            if (network.lightpath(live[i]).route.traverses(spec.perturbation.node)) offset[i] = pert;
        }
        monitored.set_offset(offset);

        if (search) {
            monitored.begin_iteration();
            search->step(pressure);
            commanded = search->eye();
        }

        std::vector<double> applied(commanded);
        for (std::size_t i = 0; i < applied.size(); ++i) applied[i] += offset[i];
        auto psi = live_qot->psi_dbm(applied);
        report.j1_trace.push_back(objective_j1(psi));
        report.psi_trace.push_back(std::move(psi));

        std::vector<double> surviving;
        for (std::size_t full_idx : survivors) {
            const auto pos = std::find(live.begin(), live.end(), full_idx) - live.begin();
            surviving.push_back(applied[static_cast<std::size_t>(pos)]);
        }
        report.nmse_trace.push_back(nmse(dbm_to_watts(surviving), ref_w));
        report.power_trace_dbm.push_back(std::move(surviving));
    }

    report.iterations = spec.dynamic_iterations;
    if (search) {
        report.candidate_evaluations = search->candidate_evaluations();
        report.eye_evaluations = search->eye_evaluations();
        report.flops = flops(FlopModel{optimizer.kind == OptimizerKind::Chso ? FlopAlgorithm::Chso : FlopAlgorithm::Hso,
                                       static_cast<double>(final_net.size()), static_cast<double>(optimizer.hurricane.parcels),
                                       static_cast<double>(spec.dynamic_iterations), 0.0, 0.0,
                                       static_cast<double>(final_net.route_element_sum())});
    }
    report.final_powers_dbm = report.power_trace_dbm.back();
    report.final_nmse = report.nmse_trace.back();
    const auto final_w = dbm_to_watts(report.final_powers_dbm);
    point.penalty_db = power_penalty(final_w, ref_w);
    report.max_abs_penalty_db = max_abs(point.penalty_db);
    if (live.size() == survivors.size()) {
        const auto psi = final_qot.psi_dbm(report.final_powers_dbm);
        report.final_j1 = objective_j1(psi);
        report.success = margin_success(psi, params.lambda1, params.lambda2);
    }

    ScenarioResult result;
    result.points.push_back(std::move(point));
    return result;
}

}  // namespace

ScenarioResult run_scenario(const Network& network, const PhysicalParams& params, const OptimizerChoice& optimizer,
                            const ScenarioSpec& spec, std::span<const double> p0_dbm) {
    spec.validate(params);
    std::vector<double> start(p0_dbm.begin(), p0_dbm.end());
    if (start.empty()) start.assign(network.size(), 0.0);
    if (start.size() != network.size()) throw std::invalid_argument("starting point size mismatch");
    return spec.dynamic() ? run_dynamic(network, params, optimizer, spec, start)
                          : run_static(network, params, optimizer, spec, start);
}

}  // namespace eonpower
