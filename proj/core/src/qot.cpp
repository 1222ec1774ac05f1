#include "eonpower/qot.hpp"

#include "eonpower/text.hpp"
#include "eonpower/units.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace eonpower {

namespace {

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double sci_factor(const PhysicalState& s, double bandwidth_hz) {
    const double alpha = field_attenuation_per_km(s.alpha_db_per_km);
    const double beta = std::abs(s.beta2_s2_per_km);
    const double gamma2 = s.gamma_per_w_km * s.gamma_per_w_km;
    return 3.0 * gamma2 / (2.0 * kPi * alpha * beta) *
           std::asinh(kPi * kPi * beta * bandwidth_hz * bandwidth_hz / (2.0 * alpha));
}

// XCI weight of interferer j on channel i, without the PSD factors.
double xci_pair_factor(const PhysicalState& s, double spacing_hz, double interferer_bw_hz) {
    const double alpha = field_attenuation_per_km(s.alpha_db_per_km);
    const double beta = std::abs(s.beta2_s2_per_km);
    const double gamma2 = s.gamma_per_w_km * s.gamma_per_w_km;
    const double half = interferer_bw_hz / 2.0;
    if (!(spacing_hz > half)) {
        throw std::domain_error("interfering channel overlaps the channel under test");
    }
    return 6.0 * gamma2 / (alpha * alpha) * (alpha / (4.0 * kPi * beta)) *
           std::log((spacing_hz + half) / (spacing_hz - half));
}

int xci_span_count(const Network& n, std::size_t i, std::size_t j, const PhysicalState& s) {
    const int shared = n.shared_spans(i, j);
    if (s.xci_span_mode == XciSpanMode::Shared) return shared;
    return shared > 0 ? static_cast<int>(n.lightpath(i).route.span_count()) : 0;
}

double margin_factor(const PhysicalState& s) {
    return db_to_linear(-(s.design_margin_db + s.transponder_margin_db));
}

}  // namespace

double span_loss_db(const Span& span, const PhysicalState& state) noexcept {
    return span.length_km * state.alpha_db_per_km + span.connectors * state.connector_loss_db +
           span.splices * state.splice_loss_db;
}

double ase_psd(const Lightpath& lightpath, const PhysicalState& state) {
    double gain_sum = lightpath.route.roadm_count * (db_to_linear(state.roadm_loss_db) - 1.0);
    for (const auto& span : lightpath.route.spans) gain_sum += db_to_linear(span_loss_db(span, state)) - 1.0;
    return state.planck * state.carrier_hz * db_to_linear(state.edfa_nf_db) * gain_sum;
}

double sci_psd(const Network& network, std::size_t i, double power_w, const PhysicalState& state) {
    const Lightpath& lp = network.lightpath(i);
    if (!(lp.bandwidth_hz > 0.0)) throw std::domain_error("channel bandwidth must be positive");
    const double g = power_w / lp.bandwidth_hz;
    return state.nli_scale * sci_factor(state, lp.bandwidth_hz) * g * g * g *
           static_cast<double>(lp.route.span_count());
}

double xci_psd(const Network& network, std::size_t i, std::span<const double> powers_w, const PhysicalState& state) {
    if (powers_w.size() != network.size()) throw std::invalid_argument("power vector size mismatch");
    const Lightpath& lp = network.lightpath(i);
    if (!(lp.bandwidth_hz > 0.0)) throw std::domain_error("channel bandwidth must be positive");
    const double gi = powers_w[i] / lp.bandwidth_hz;
    double sum = 0.0;
    for (std::size_t j = 0; j < network.size(); ++j) {
        if (j == i) continue;
        const int spans = xci_span_count(network, i, j, state);
        if (spans == 0) continue;
        const Lightpath& other = network.lightpath(j);
        const double gj = powers_w[j] / other.bandwidth_hz;
        const double df = std::abs(lp.center_frequency_hz - other.center_frequency_hz);
        sum += xci_pair_factor(state, df, other.bandwidth_hz) * gj * gj * spans;
    }
    return state.nli_scale * gi * sum;
}

double snr(const Network& network, std::size_t i, std::span<const double> powers_w, const PhysicalState& state) {
    const Lightpath& lp = network.lightpath(i);
    const double noise = ase_psd(lp, state) + sci_psd(network, i, powers_w[i], state) +
                         xci_psd(network, i, powers_w, state);
    if (!(noise > 0.0)) throw std::domain_error("total noise PSD is zero");
    return powers_w[i] / (noise * lp.bandwidth_hz);
}

double snr_b2b(double snr_linear, const PhysicalState& state) noexcept {
    return snr_linear * margin_factor(state);
}

std::vector<double> residual_margin(const Network& network, std::span<const double> powers_w,
                                    const PhysicalState& state) {
    std::vector<double> psi(network.size());
    for (std::size_t i = 0; i < network.size(); ++i) {
        const double target = db_to_linear(network.lightpath(i).modulation.snr_b2b_target_db);
        psi[i] = snr_b2b(snr(network, i, powers_w, state), state) / target;
    }
    return psi;
}

double objective_j1(std::span<const double> psi) noexcept {
    double acc = 0.0;
    for (double v : psi) acc += (1.0 - v) * (1.0 - v);
    return std::sqrt(acc);
}

double margin_shortfall(std::span<const double> psi, double lambda1) noexcept {
    double acc = 0.0;
    for (double v : psi) acc += std::max(0.0, 1.0 - lambda1 - v);
    return acc;
}

double ber_awgn(ModulationKind kind, double snr_linear) {
    if (!(snr_linear > 0.0)) return 0.5;
    switch (kind) {
        case ModulationKind::PmBpsk:
            return q_function(std::sqrt(2.0 * snr_linear));
        case ModulationKind::PmQpsk:
            return q_function(std::sqrt(snr_linear));
        default: {
            const double m = modulation(kind).constellation_size;
            const double bits = std::log2(m);
            const double ber = 4.0 / bits * (1.0 - 1.0 / std::sqrt(m)) * q_function(std::sqrt(3.0 * snr_linear / (m - 1.0)));
            return std::min(ber, 0.5);
        }
    }
}

double ber_calibration(const ModulationFormat& format, double ber_target) {
    const double target = db_to_linear(format.snr_b2b_target_db);
    auto f = [&](double log_k) { return ber_awgn(format.kind, target * std::exp(log_k)) - ber_target; };
    std::uintmax_t iters = 200;
    const auto tol = boost::math::tools::eps_tolerance<double>(50);
    const auto [lo, hi] = boost::math::tools::toms748_solve(f, -12.0, 12.0, tol, iters);
    return std::exp(0.5 * (lo + hi));
}

double ber(const ModulationFormat& format, double snr_b2b_linear, double ber_target) {
    if (!(snr_b2b_linear > 0.0)) return 0.5;
    return ber_awgn(format.kind, snr_b2b_linear * ber_calibration(format, ber_target));
}

ConstraintVerdict check_constraints(const Network& network, std::span<const double> powers_dbm,
                                    const PhysicalParams& params, double tau_years) {
    if (powers_dbm.size() != network.size()) throw std::invalid_argument("power vector size mismatch");
    const PhysicalState state = params.at(tau_years);
    const auto psi = residual_margin(network, dbm_to_watts(powers_dbm), state);
    ConstraintVerdict v;
    for (std::size_t i = 0; i < network.size(); ++i) {
        v.snr_ok.push_back(psi[i] >= 1.0 - params.lambda1);
        v.rate_ok.push_back(true);
        v.power_ok.push_back(powers_dbm[i] >= params.p_min_dbm && powers_dbm[i] <= params.p_max_dbm);
        v.feasible = v.feasible && v.channel_feasible(i);
    }
    return v;
}

// =============================================================================
// QotEvaluator
// =============================================================================

QotEvaluator::QotEvaluator(const Network& network, const PhysicalParams& params, double tau_years)
    : network_(network), params_(params), state_(params.at(tau_years)) {
    const std::size_t m = network.size();
    bandwidth_.resize(m);
    ase_.resize(m);
    sci_coef_.resize(m);
    xci_coef_.assign(m * m, 0.0);
    psi_scale_.resize(m);
    const double margin = margin_factor(state_);
    for (std::size_t i = 0; i < m; ++i) {
        const Lightpath& lp = network.lightpath(i);
        const double bw = lp.bandwidth_hz;
        bandwidth_[i] = bw;
        ase_[i] = ase_psd(lp, state_);
        sci_coef_[i] = state_.nli_scale * sci_factor(state_, bw) * static_cast<double>(lp.route.span_count()) / (bw * bw * bw);
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            const int spans = xci_span_count(network, i, j, state_);
            if (spans == 0) continue;
            const Lightpath& other = network.lightpath(j);
            const double df = std::abs(lp.center_frequency_hz - other.center_frequency_hz);
            xci_coef_[i * m + j] = state_.nli_scale * xci_pair_factor(state_, df, other.bandwidth_hz) * spans /
                                   (bw * other.bandwidth_hz * other.bandwidth_hz);
        }
        psi_scale_[i] = margin / db_to_linear(lp.modulation.snr_b2b_target_db);
    }
}

void QotEvaluator::psi_watts(std::span<const double> powers_w, std::span<double> psi) const {
    const std::size_t m = size();
    if (powers_w.size() != m || psi.size() != m) throw std::invalid_argument("power vector size mismatch");
    for (std::size_t i = 0; i < m; ++i) {
        const double p = powers_w[i];
        const double* row = xci_coef_.data() + i * m;
        double xci = 0.0;
        for (std::size_t j = 0; j < m; ++j) xci += row[j] * powers_w[j] * powers_w[j];
        const double noise = ase_[i] + sci_coef_[i] * p * p * p + p * xci;
        psi[i] = p / (noise * bandwidth_[i]) * psi_scale_[i];
    }
}

void QotEvaluator::psi_dbm(std::span<const double> powers_dbm, std::span<double> psi) const {
    std::vector<double> w(powers_dbm.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = dbm_to_watts(powers_dbm[i]);
    psi_watts(w, psi);
}

std::vector<double> QotEvaluator::psi_dbm(std::span<const double> powers_dbm) const {
    std::vector<double> psi(size());
    psi_dbm(powers_dbm, psi);
    return psi;
}

double QotEvaluator::j1_dbm(std::span<const double> powers_dbm) const {
    return objective_j1(psi_dbm(powers_dbm));
}

QotBreakdown QotEvaluator::breakdown_dbm(std::span<const double> powers_dbm) const {
    const std::size_t m = size();
    const auto w = dbm_to_watts(powers_dbm);
    QotBreakdown b;
    for (std::size_t i = 0; i < m; ++i) {
        const Lightpath& lp = network_.lightpath(i);
        b.ase_psd.push_back(ase_psd(lp, state_));
        b.sci_psd.push_back(sci_psd(network_, i, w[i], state_));
        b.xci_psd.push_back(xci_psd(network_, i, w, state_));
        const double s = w[i] / ((b.ase_psd[i] + b.sci_psd[i] + b.xci_psd[i]) * lp.bandwidth_hz);
        b.snr.push_back(s);
        b.snr_b2b.push_back(snr_b2b(s, state_));
        b.psi.push_back(b.snr_b2b[i] / db_to_linear(lp.modulation.snr_b2b_target_db));
        b.ber.push_back(ber(lp.modulation, b.snr_b2b[i], params_.ber_target));
    }
    b.constraints = check_constraints(network_, powers_dbm, params_, state_.tau_years);
    return b;
}

void write_breakdown_csv(std::ostream& out, const Network& network, const QotBreakdown& b) {
    out << "channel_id,ase_psd_w_per_hz,sci_psd_w_per_hz,xci_psd_w_per_hz,snr_db,snr_b2b_db,psi,ber,"
           "c1_snr,c2_rate,c3_power,feasible\n";
    for (std::size_t i = 0; i < network.size(); ++i) {
        out << csv_row({network.lightpath(i).route.id, format_number(b.ase_psd[i]), format_number(b.sci_psd[i]),
                        format_number(b.xci_psd[i]), format_number(linear_to_db(b.snr[i])),
                        format_number(linear_to_db(b.snr_b2b[i])), format_number(b.psi[i]), format_number(b.ber[i]),
                        b.constraints.snr_ok[i] ? "1" : "0", b.constraints.rate_ok[i] ? "1" : "0",
                        b.constraints.power_ok[i] ? "1" : "0", b.constraints.channel_feasible(i) ? "1" : "0"})
            << '\n';
    }
}

}  // namespace eonpower
