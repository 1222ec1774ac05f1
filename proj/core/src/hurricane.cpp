#include "eonpower/hurricane.hpp"

#include "eonpower/metrics.hpp"
#include "eonpower/units.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace eonpower {

void HurricaneParams::validate() const {
    if (parcels == 0) throw std::invalid_argument("hurricane: parcel count must be at least 1");
    if (iterations == 0) throw std::invalid_argument("hurricane: iteration budget must be at least 1");
    if (!(mu > 0.0 && mu <= 4.0)) throw std::invalid_argument("hurricane: mu must lie in (0, 4]");
    if (!(omega >= kOmegaMin * (1 - 1e-12) && omega <= kOmegaMax * (1 + 1e-12))) {
        throw std::invalid_argument("hurricane: omega outside [1e-4*pi, 2*pi]");
    }
    if (!(r0 >= 0.0) || !std::isfinite(r0)) throw std::invalid_argument("hurricane: r0 must be finite and non-negative");
    if (!(upsilon > 0.0)) throw std::invalid_argument("hurricane: upsilon must be positive");
}

HurricaneParams HurricaneParams::chso() { return HurricaneParams{}; }

HurricaneParams HurricaneParams::hso() {
    HurricaneParams p;
    p.parcels = 228;
    p.iterations = 150;
    p.r0 = 6.1873e-7;
    p.omega = 0.2839;
    p.variant = HurricaneVariant::Uniform;
    return p;
}

double logistic_step(double z, double mu) noexcept { return mu * z * (1.0 - z); }

double spiral_radius(double r0, double z, double theta) noexcept { return r0 * std::exp(z * theta); }

std::size_t parcel_channel(std::size_t k, std::size_t m) {
    if (m < 2) throw std::invalid_argument("hurricane: at least two channels are required");
    return k % (m - 1);
}

void parcel_update(std::span<const double> eye_dbm, std::size_t k, double radius, double angle,
                   std::span<double> candidate_dbm) {
    const std::size_t i = parcel_channel(k, eye_dbm.size());
    std::copy(eye_dbm.begin(), eye_dbm.end(), candidate_dbm.begin());
    candidate_dbm[i] = radius * std::cos(angle) + eye_dbm[i];
    candidate_dbm[i + 1] = radius * std::sin(angle) + eye_dbm[i + 1];
}

double angular_update(double theta, double omega, double radius, double p_max, double z) noexcept {
    if (radius <= p_max) return theta + omega;
    return theta + omega * std::pow(p_max / radius, z);
}

void boundary_reset(ParcelState& parcel) noexcept {
    parcel.theta_initial = parcel.z * 2.0 * kPi;
    parcel.theta = 0.0;
}

double initial_chaos_value(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (;;) {
        const double z = u(rng);
        bool near_fixed = false;
        for (double bad : {0.0, 0.25, 0.5, 0.75, 1.0}) near_fixed = near_fixed || std::abs(z - bad) < 1e-6;
        if (!near_fixed) return z;
    }
}

// =============================================================================
// HurricaneSearch
// =============================================================================

HurricaneSearch::HurricaneSearch(HurricaneParams params, double p_min_dbm, double p_max_dbm)
    : params_(std::move(params)), p_min_(p_min_dbm), p_max_(p_max_dbm) {
    params_.validate();
    if (!(p_min_ < p_max_)) throw std::invalid_argument("hurricane: empty power box");
}

void HurricaneSearch::init(std::span<const double> p0_dbm) {
    parcels_.assign(params_.parcels, ParcelState{});
    for (std::size_t k = 0; k < parcels_.size(); ++k) {
        auto& parcel = parcels_[k];
        parcel.rng.seed(params_.seed ^ static_cast<std::uint64_t>(k + 1));
        parcel.z = initial_chaos_value(parcel.rng);
    }
    iteration_ = 0;
    candidate_evals_ = 0;
    eye_evals_ = 0;
    reset_dimension(p0_dbm);
}

void HurricaneSearch::reset_dimension(std::span<const double> eye_dbm) {
    if (eye_dbm.size() < 2) throw std::invalid_argument("hurricane: at least two channels are required");
    for (double p : eye_dbm) {
        if (!(p >= p_min_ && p <= p_max_)) throw std::invalid_argument("hurricane: starting point outside the power box");
    }
    eye_.assign(eye_dbm.begin(), eye_dbm.end());
    candidate_.assign(eye_.size(), 0.0);
    eye_pressure_ = std::numeric_limits<double>::quiet_NaN();
}

double HurricaneSearch::next_z(std::size_t k) {
    ParcelState& parcel = parcels_[k - 1];
    if (params_.z_source) {
        parcel.z = params_.z_source(k, iteration_);
        return parcel.z;
    }
    if (iteration_ == 1) return parcel.z;
    if (params_.variant == HurricaneVariant::Chaotic) {
        parcel.z = logistic_step(parcel.z, params_.mu);
        // Finite precision can land the orbit on 0 or 1; restart it.
        if (!(parcel.z > 0.0 && parcel.z < 1.0)) parcel.z = initial_chaos_value(parcel.rng);
    } else {
        parcel.z = std::uniform_real_distribution<double>(0.0, 1.0)(parcel.rng);
    }
    return parcel.z;
}

void HurricaneSearch::step(const PressureFn& pressure) {
    if (parcels_.empty()) throw std::logic_error("hurricane: init() not called");
    ++iteration_;
    const PressureSample eye_sample = pressure(eye_);
    eye_pressure_ = params_.upsilon * eye_sample.pressure;
    eye_shortfall_ = eye_sample.shortfall;
    ++eye_evals_;
    const std::size_t m = eye_.size();
    for (std::size_t k = 1; k <= params_.parcels; ++k) {
        ParcelState& parcel = parcels_[k - 1];
        const double z = next_z(k);
        parcel.radius = spiral_radius(params_.r0, z, parcel.theta);
        parcel_update(eye_, k, parcel.radius, parcel.theta_initial + parcel.theta, candidate_);
        const PressureSample sample = pressure(candidate_);
        const double candidate_pressure = params_.upsilon * sample.pressure;
        ++candidate_evals_;

        const std::size_t i = parcel_channel(k, m);
        const auto outside = [&](double p) { return !(p >= p_min_ && p <= p_max_); };
        if (outside(candidate_[i]) || outside(candidate_[i + 1])) {
            boundary_reset(parcel);
            continue;
        }
        const bool margin_ok =
            params_.acceptance == Acceptance::Pressure || sample.shortfall <= eye_shortfall_;
        if (candidate_pressure < eye_pressure_ && margin_ok) {
            eye_ = candidate_;
            eye_pressure_ = candidate_pressure;
            eye_shortfall_ = sample.shortfall;
        }
        parcel.theta = angular_update(parcel.theta, params_.omega, parcel.radius, p_max_, z);
    }
}

// =============================================================================
// Whole runs
// =============================================================================

void finish_report(RunReport& report, const QotEvaluator& qot, std::optional<std::span<const double>> reference_dbm) {
    std::vector<double> ref_w;
    if (reference_dbm) ref_w = dbm_to_watts(*reference_dbm);
    report.channel_ids.clear();
    for (const auto& lp : qot.network().lightpaths()) report.channel_ids.push_back(lp.route.id);
    report.j1_trace.clear();
    report.psi_trace.clear();
    report.nmse_trace.clear();
    for (const auto& p : report.power_trace_dbm) {
        auto psi = qot.psi_dbm(p);
        report.j1_trace.push_back(objective_j1(psi));
        report.psi_trace.push_back(std::move(psi));
        if (reference_dbm) report.nmse_trace.push_back(nmse(dbm_to_watts(p), ref_w));
    }
    const auto psi = qot.psi_dbm(report.final_powers_dbm);
    report.final_j1 = objective_j1(psi);
    report.success = margin_success(psi, qot.params().lambda1, qot.params().lambda2);
    if (reference_dbm) {
        const auto final_w = dbm_to_watts(report.final_powers_dbm);
        report.final_nmse = nmse(final_w, ref_w);
        report.max_abs_penalty_db = max_abs(power_penalty(final_w, ref_w));
    }
}

PressureSample exact_pressure(const QotEvaluator& qot, std::span<const double> powers_dbm) {
    const auto psi = qot.psi_dbm(powers_dbm);
    return {objective_j1(psi), margin_shortfall(psi, qot.params().lambda1)};
}

RunReport optimize(const QotEvaluator& qot, const HurricaneParams& params, std::span<const double> p0_dbm,
                   std::optional<std::span<const double>> reference_dbm) {
    const PressureFn pressure = [&qot](std::span<const double> p) { return exact_pressure(qot, p); };
    return optimize_with(qot, params, p0_dbm, pressure, reference_dbm);
}

RunReport optimize_with(const QotEvaluator& qot, const HurricaneParams& params, std::span<const double> p0_dbm,
                        const PressureFn& pressure, std::optional<std::span<const double>> reference_dbm,
                        const std::function<void(std::size_t)>& before_step) {
    if (p0_dbm.size() != qot.size()) throw std::invalid_argument("hurricane: starting point size mismatch");
    HurricaneSearch search(params, qot.params().p_min_dbm, qot.params().p_max_dbm);
    search.init(p0_dbm);

    RunReport report;
    report.algorithm = params.variant == HurricaneVariant::Chaotic ? "chso" : "hso";
    report.seed = params.seed;
    report.initial_powers_dbm.assign(p0_dbm.begin(), p0_dbm.end());
    std::vector<std::vector<double>> eyes;
    eyes.reserve(params.iterations);
    for (std::size_t n = 0; n < params.iterations; ++n) {
        if (before_step) before_step(n + 1);
        search.step(pressure);
        eyes.push_back(search.eye());
    }
    for (std::size_t n = 0; n < eyes.size(); ++n) {
        report.power_trace_dbm.push_back(n >= params.actuation_delay ? eyes[n - params.actuation_delay]
                                                                     : report.initial_powers_dbm);
    }
    report.final_powers_dbm = report.power_trace_dbm.back();
    report.iterations = search.iteration();
    report.candidate_evaluations = search.candidate_evaluations();
    report.eye_evaluations = search.eye_evaluations();
    report.flops = flops(FlopModel{params.variant == HurricaneVariant::Chaotic ? FlopAlgorithm::Chso : FlopAlgorithm::Hso,
                                   static_cast<double>(qot.size()), static_cast<double>(params.parcels),
                                   static_cast<double>(params.iterations), 0.0, 0.0,
                                   static_cast<double>(qot.network().route_element_sum())});
    finish_report(report, qot, reference_dbm);
    return report;
}

}  // namespace eonpower
