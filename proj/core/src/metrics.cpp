#include "eonpower/metrics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace eonpower {

double nmse(std::span<const double> candidate_w, std::span<const double> reference_w) {
    if (candidate_w.size() != reference_w.size()) throw std::invalid_argument("nmse: size mismatch");
    double err = 0.0;
    double ref = 0.0;
    for (std::size_t i = 0; i < reference_w.size(); ++i) {
        const double d = candidate_w[i] - reference_w[i];
        err += d * d;
        ref += reference_w[i] * reference_w[i];
    }
    if (!(ref > 0.0)) throw std::invalid_argument("nmse: zero reference vector");
    return err / ref;
}

double mean_nmse(const std::vector<std::vector<double>>& candidates_w, std::span<const double> reference_w) {
    if (candidates_w.empty()) throw std::invalid_argument("mean_nmse: no realizations");
    double acc = 0.0;
    for (const auto& c : candidates_w) acc += nmse(c, reference_w);
    return acc / static_cast<double>(candidates_w.size());
}

std::vector<double> power_penalty(std::span<const double> powers_w, std::span<const double> reference_w) {
    if (powers_w.size() != reference_w.size()) throw std::invalid_argument("power_penalty: size mismatch");
    std::vector<double> out(powers_w.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!(powers_w[i] > 0.0) || !(reference_w[i] > 0.0)) {
            throw std::invalid_argument("power_penalty: powers must be positive");
        }
        out[i] = 10.0 * std::log10(powers_w[i] / reference_w[i]);
    }
    return out;
}

double max_abs(std::span<const double> values) noexcept {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

bool margin_success(std::span<const double> psi, double lambda1, double lambda2) noexcept {
    for (double v : psi) {
        if (!(v >= 1.0 - lambda1 && v <= 1.0 + lambda2)) return false;
    }
    return true;
}

double SettlingResult::score() const noexcept {
    if (per_channel.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& s : per_channel) acc += s ? static_cast<double>(*s) : static_cast<double>(samples + 1);
    return acc / static_cast<double>(per_channel.size());
}

SettlingResult settling_iteration(const std::vector<std::vector<double>>& trace_w,
                                  std::span<const double> reference_w, double tolerance_w) {
    if (trace_w.empty()) throw std::invalid_argument("settling_iteration: empty trace");
    SettlingResult r;
    r.samples = trace_w.size();
    r.per_channel.resize(reference_w.size());
    bool all = true;
    double acc = 0.0;
    for (std::size_t i = 0; i < reference_w.size(); ++i) {
        // Walk backwards to the last out-of-tolerance sample.
        std::size_t first_ok = trace_w.size();
        for (std::size_t n = trace_w.size(); n-- > 0;) {
            if (trace_w[n].size() != reference_w.size()) throw std::invalid_argument("settling_iteration: size mismatch");
            if (std::abs(trace_w[n][i] - reference_w[i]) > tolerance_w) break;
            first_ok = n;
        }
        if (first_ok == trace_w.size()) {
            all = false;
            continue;
        }
        r.per_channel[i] = first_ok + 1;
        acc += static_cast<double>(first_ok + 1);
    }
    if (all && !reference_w.empty()) r.mean = acc / static_cast<double>(reference_w.size());
    return r;
}

double rm_integral(const std::vector<std::vector<double>>& psi_trace) {
    if (psi_trace.empty()) throw std::invalid_argument("rm_integral: empty trace");
    const std::size_t m = psi_trace.front().size();
    if (m == 0) return 0.0;
    double acc = 0.0;
    for (const auto& psi : psi_trace) {
        if (psi.size() != m) throw std::invalid_argument("rm_integral: ragged trace");
        for (double v : psi) acc += std::abs(10.0 * std::log10(v));
    }
    return acc / static_cast<double>(m);
}

double flops(const FlopModel& f) {
    const double m = f.channels;
    const double qot_cost = 19.0 * m * m + 5.0 * m + f.route_element_sum;
    switch (f.algorithm) {
        case FlopAlgorithm::Hso:
            return 22.0 * f.iterations * f.parcels + 9.0 * f.iterations * f.parcels +
                   3.0 * qot_cost * f.iterations * f.parcels;
        case FlopAlgorithm::Chso:
            return 22.0 * f.iterations * f.parcels + 3.0 * f.iterations * f.parcels +
                   3.0 * qot_cost * f.iterations * f.parcels;
        case FlopAlgorithm::Gd:
            return f.gd_iterations * (m * m + 4.0 * m + 3.0) +
                   qot_cost * (f.gd_iterations * (5.0 * f.gd_backtracks * m + 5.0 * m + 1.0));
    }
    return 0.0;
}

}  // namespace eonpower
