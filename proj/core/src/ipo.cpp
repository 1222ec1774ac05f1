#include "eonpower/ipo.hpp"

#include "eonpower/parallel.hpp"
#include "eonpower/text.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace eonpower {

GoldenSectionResult golden_section(const std::function<double(double)>& f, double lower, double upper,
                                   double tolerance, std::size_t max_reductions) {
    if (!(upper >= lower)) throw std::invalid_argument("golden_section: empty bracket");
    if (!(tolerance > 0.0)) throw std::invalid_argument("golden_section: tolerance must be positive");
    GoldenSectionResult r;
    auto eval = [&](double x) {
        const double v = f(x);
        ++r.evaluations;
        if (!std::isfinite(v)) throw std::runtime_error("golden_section: objective is not finite");
        return v;
    };
    constexpr double inv = 1.0 / kGoldenRatio;
    double a = lower;
    double b = upper;
    if (b - a >= tolerance) {
        double c = b - (b - a) * inv;
        double d = a + (b - a) * inv;
        double fc = eval(c);
        double fd = eval(d);
        for (std::size_t it = 0; b - a >= tolerance && it < max_reductions; ++it) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - (b - a) * inv;
                fc = eval(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + (b - a) * inv;
                fd = eval(d);
            }
            r.widths.push_back(b - a);
        }
    }
    r.lower = a;
    r.upper = b;
    r.midpoint = 0.5 * (a + b);
    return r;
}

void IpoConfig::validate() const {
    if (loops == 0) throw std::invalid_argument("ipo: loop count must be at least 1");
    if (realizations == 0) throw std::invalid_argument("ipo: realizations must be at least 1");
    if (!(tol_r0 > 0.0) || !(tol_omega > 0.0)) throw std::invalid_argument("ipo: tolerances must be positive");
    if (!(r0_log_lower < r0_log_upper)) throw std::invalid_argument("ipo: empty r0 box");
    if (!(omega_lower < omega_upper)) throw std::invalid_argument("ipo: empty omega box");
    if (!(recenter_ratio > 1.0)) throw std::invalid_argument("ipo: recenter ratio must exceed 1");
}

double mean_final_j1(const QotEvaluator& qot, const HurricaneParams& params, std::span<const double> p0_dbm,
                     std::size_t realizations, std::uint64_t seed_base, std::size_t workers) {
    std::vector<double> finals(realizations);
    parallel_for(realizations, workers, [&](std::size_t r) {
        HurricaneParams p = params;
        p.seed = seed_base + r;
        finals[r] = optimize(qot, p, p0_dbm).final_j1;
    });
    double acc = 0.0;
    for (double v : finals) acc += v;
    return acc / static_cast<double>(realizations);
}

TuneStep tune_parameter(TuneTarget target, const QotEvaluator& qot, const HurricaneParams& base,
                        std::span<const double> p0_dbm, const IpoConfig& config, double lower, double upper) {
    auto with_value = [&](double x) {
        HurricaneParams p = base;
        if (target == TuneTarget::R0) {
            p.r0 = std::pow(10.0, x);
        } else {
            p.omega = x;
        }
        return p;
    };
    auto objective = [&](double x) {
        return mean_final_j1(qot, with_value(x), p0_dbm, config.realizations, config.seed_base, config.workers);
    };
    const double tol = target == TuneTarget::R0 ? config.tol_r0 : config.tol_omega;
    const auto gs = golden_section(objective, lower, upper, tol);
    TuneStep step;
    step.target = target;
    step.lower = lower;
    step.upper = upper;
    step.value = target == TuneTarget::R0 ? std::pow(10.0, gs.midpoint) : gs.midpoint;
    step.objective = objective(gs.midpoint);
    return step;
}

std::pair<double, double> recentered_bracket(std::size_t loop, double center, double box_lower, double box_upper,
                                             double ratio) {
    if (loop <= 1) return {box_lower, box_upper};
    const double nearest = std::min(std::abs(center - box_lower), std::abs(center - box_upper));
    const double width = nearest / (0.5 * std::pow(ratio, static_cast<double>(loop) - 2.0));
    return {std::max(box_lower, center - width / 2.0), std::min(box_upper, center + width / 2.0)};
}

TuneResult tune(const QotEvaluator& qot, const HurricaneParams& base, std::span<const double> p0_dbm,
                const IpoConfig& config) {
    config.validate();
    TuneResult result;
    HurricaneParams current = base;
    for (std::size_t loop = 1; loop <= config.loops; ++loop) {
        const auto [r_lo, r_hi] = recentered_bracket(loop, std::log10(current.r0), config.r0_log_lower,
                                                     config.r0_log_upper, config.recenter_ratio);
        TuneStep r0_step = tune_parameter(TuneTarget::R0, qot, current, p0_dbm, config, r_lo, r_hi);
        r0_step.loop = loop;
        current.r0 = r0_step.value;
        result.history.push_back(r0_step);

        const auto [w_lo, w_hi] = recentered_bracket(loop, current.omega, config.omega_lower, config.omega_upper,
                                                     config.recenter_ratio);
        TuneStep omega_step = tune_parameter(TuneTarget::Omega, qot, current, p0_dbm, config, w_lo, w_hi);
        omega_step.loop = loop;
        current.omega = omega_step.value;
        result.history.push_back(omega_step);
    }
    result.r0 = current.r0;
    result.omega = current.omega;
    return result;
}

// =============================================================================
// Success-probability surfaces
// =============================================================================

namespace {

// successes[row][checkpoint] summed over seeds; one full run per (row, seed).
std::vector<std::vector<std::size_t>> checkpoint_successes(
    const QotEvaluator& qot, const std::vector<HurricaneParams>& rows, std::span<const double> p0_dbm,
    const std::vector<std::size_t>& checkpoints, std::size_t realizations, std::uint64_t seed_base,
    std::size_t workers) {
    const double l1 = qot.params().lambda1;
    const double l2 = qot.params().lambda2;
    const bool start_ok = margin_success(qot.psi_dbm(p0_dbm), l1, l2);
    std::vector<std::vector<std::vector<char>>> hits(
        rows.size(), std::vector<std::vector<char>>(realizations, std::vector<char>(checkpoints.size(), 0)));
    parallel_for(rows.size() * realizations, workers, [&](std::size_t task) {
        const std::size_t row = task / realizations;
        const std::size_t r = task % realizations;
        auto& out = hits[row][r];
        HurricaneParams p = rows[row];
        p.seed = seed_base + r;
        const std::size_t last = *std::max_element(checkpoints.begin(), checkpoints.end());
        if (p.parcels == 0 || last == 0) {
            for (std::size_t c = 0; c < checkpoints.size(); ++c) out[c] = checkpoints[c] == 0 && p.parcels > 0 && start_ok;
            return;
        }
        p.iterations = last;
        const RunReport rep = optimize(qot, p, p0_dbm);
        for (std::size_t c = 0; c < checkpoints.size(); ++c) {
            const std::size_t n = checkpoints[c];
            out[c] = n == 0 ? start_ok : margin_success(rep.psi_trace[n - 1], l1, l2);
        }
    });
    std::vector<std::vector<std::size_t>> totals(rows.size(), std::vector<std::size_t>(checkpoints.size(), 0));
    for (std::size_t row = 0; row < rows.size(); ++row) {
        for (std::size_t r = 0; r < realizations; ++r) {
            for (std::size_t c = 0; c < checkpoints.size(); ++c) totals[row][c] += hits[row][r][c];
        }
    }
    return totals;
}

}  // namespace

Surface cpos_ps1(const QotEvaluator& qot, const HurricaneParams& base, std::span<const double> p0_dbm,
                 const std::vector<double>& r0_values, const std::vector<std::size_t>& iterations,
                 std::size_t realizations, std::uint64_t seed_base, std::size_t workers) {
    if (r0_values.empty() || iterations.empty()) throw std::invalid_argument("cpos_ps1: empty grid");
    if (realizations == 0) throw std::invalid_argument("cpos_ps1: realizations must be at least 1");
    std::vector<HurricaneParams> rows;
    for (double r0 : r0_values) {
        HurricaneParams p = base;
        p.r0 = r0;
        rows.push_back(p);
    }
    const auto totals = checkpoint_successes(qot, rows, p0_dbm, iterations, realizations, seed_base, workers);
    Surface s{"r0", "iteration", {}};
    for (std::size_t row = 0; row < rows.size(); ++row) {
        for (std::size_t c = 0; c < iterations.size(); ++c) {
            s.cells.push_back({r0_values[row], static_cast<double>(iterations[c]), totals[row][c], realizations});
        }
    }
    return s;
}

Surface cpos_ps2(const QotEvaluator& qot, const HurricaneParams& base, std::span<const double> p0_dbm,
                 const std::vector<std::size_t>& parcel_counts, const std::vector<std::size_t>& iteration_budgets,
                 std::size_t realizations, std::uint64_t seed_base, std::size_t workers) {
    if (parcel_counts.empty() || iteration_budgets.empty()) throw std::invalid_argument("cpos_ps2: empty grid");
    if (realizations == 0) throw std::invalid_argument("cpos_ps2: realizations must be at least 1");
    std::vector<HurricaneParams> rows;
    for (std::size_t k : parcel_counts) {
        HurricaneParams p = base;
        p.parcels = k;
        rows.push_back(p);
    }
    auto totals = checkpoint_successes(qot, rows, p0_dbm, iteration_budgets, realizations, seed_base, workers);
    Surface s{"parcels", "iterations", {}};
    for (std::size_t row = 0; row < rows.size(); ++row) {
        for (std::size_t c = 0; c < iteration_budgets.size(); ++c) {
            const std::size_t hits = iteration_budgets[c] == 0 ? 0 : totals[row][c];
            s.cells.push_back({static_cast<double>(parcel_counts[row]), static_cast<double>(iteration_budgets[c]), hits,
                               realizations});
        }
    }
    return s;
}

void write_surface_csv(std::ostream& out, const Surface& s) {
    out << csv_row({s.first_name, s.second_name, "ps", "successes", "trials"}) << '\n';
    for (const auto& c : s.cells) {
        out << csv_row({format_number(c.first), format_number(c.second), format_number(c.probability()),
                        format_number(static_cast<std::int64_t>(c.successes)),
                        format_number(static_cast<std::int64_t>(c.trials))})
            << '\n';
    }
}

std::vector<ParetoPoint> pareto_frontier(const Surface& surface, const FlopModel& model, double threshold) {
    std::vector<ParetoPoint> success;
    for (const auto& c : surface.cells) {
        if (c.probability() >= threshold && c.first > 0 && c.second > 0) {
            ParetoPoint p;
            p.parcels = static_cast<std::size_t>(c.first);
            p.iterations = static_cast<std::size_t>(c.second);
            p.probability = c.probability();
            success.push_back(p);
        }
    }
    std::sort(success.begin(), success.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
        return a.iterations != b.iterations ? a.iterations < b.iterations : a.parcels < b.parcels;
    });
    std::vector<ParetoPoint> frontier;
    for (const auto& p : success) {
        // The first entry per N_f has the smallest K; keep it only if it beats every shorter budget.
        if (!frontier.empty() && frontier.back().iterations == p.iterations) continue;
        if (!frontier.empty() && p.parcels >= frontier.back().parcels) continue;
        ParetoPoint q = p;
        FlopModel m = model;
        m.parcels = static_cast<double>(q.parcels);
        m.iterations = static_cast<double>(q.iterations);
        q.flops = flops(m);
        frontier.push_back(q);
    }
    return frontier;
}

ParetoPoint select_tradeoff(const std::vector<ParetoPoint>& frontier) {
    if (frontier.empty()) throw std::invalid_argument("select_tradeoff: empty frontier");
    return *std::min_element(frontier.begin(), frontier.end(),
                             [](const ParetoPoint& a, const ParetoPoint& b) { return a.flops < b.flops; });
}

}  // namespace eonpower
