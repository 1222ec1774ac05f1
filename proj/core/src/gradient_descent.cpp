#include "eonpower/gradient_descent.hpp"

#include "eonpower/hurricane.hpp"
#include "eonpower/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eonpower {

void GdParams::validate() const {
    if (!(sufficient_decrease > 0.0 && sufficient_decrease <= 0.5)) {
        throw std::invalid_argument("gd: sufficient-decrease coefficient must lie in (0, 0.5]");
    }
    if (!(shrink > 0.0 && shrink < 1.0)) throw std::invalid_argument("gd: shrink factor must lie in (0, 1)");
    if (!(fd_step_db > 0.0)) throw std::invalid_argument("gd: finite-difference step must be positive");
    if (!(initial_step_db > 0.0)) throw std::invalid_argument("gd: initial step must be positive");
    if (gradient_tolerance < 0.0 || objective_tolerance < 0.0) throw std::invalid_argument("gd: negative tolerance");
    if (max_iterations == 0) throw std::invalid_argument("gd: iteration cap must be at least 1");
}

std::vector<double> gradient_j1(const QotEvaluator& qot, std::span<const double> powers_dbm, double step_db) {
    const double lo = qot.params().p_min_dbm;
    const double hi = qot.params().p_max_dbm;
    std::vector<double> p(powers_dbm.begin(), powers_dbm.end());
    std::vector<double> g(p.size());
    const double f0 = qot.j1_dbm(p);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double x = p[i];
        const bool up_ok = x + step_db <= hi;
        const bool down_ok = x - step_db >= lo;
        if (up_ok && down_ok) {
            p[i] = x + step_db;
            const double fp = qot.j1_dbm(p);
            p[i] = x - step_db;
            const double fm = qot.j1_dbm(p);
            g[i] = (fp - fm) / (2.0 * step_db);
        } else if (up_ok) {
            p[i] = x + step_db;
            g[i] = (qot.j1_dbm(p) - f0) / step_db;
        } else {
            p[i] = x - step_db;
            g[i] = (f0 - qot.j1_dbm(p)) / step_db;
        }
        p[i] = x;
    }
    return g;
}

std::vector<double> descent_direction(std::span<const double> gradient) {
    double norm = 0.0;
    for (double v : gradient) norm += v * v;
    norm = std::sqrt(norm);
    std::vector<double> d(gradient.size(), 0.0);
    if (norm == 0.0) return d;
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = -gradient[i] / norm;
    return d;
}

RunReport optimize_gd(const QotEvaluator& qot, const GdParams& params, std::span<const double> p0_dbm,
                      std::optional<std::span<const double>> reference_dbm) {
    params.validate();
    if (p0_dbm.size() != qot.size()) throw std::invalid_argument("gd: starting point size mismatch");
    const double lo = qot.params().p_min_dbm;
    const double hi = qot.params().p_max_dbm;
    for (double v : p0_dbm) {
        if (!(v >= lo && v <= hi)) throw std::invalid_argument("gd: starting point outside the power box");
    }

    RunReport report;
    report.algorithm = "gd";
    report.initial_powers_dbm.assign(p0_dbm.begin(), p0_dbm.end());
    std::vector<double> x = report.initial_powers_dbm;
    double fx = qot.j1_dbm(x);
    double step = params.initial_step_db;
    std::size_t total_backtracks = 0;
    report.status = "max_iterations";

    std::vector<double> trial(x.size());
    for (std::size_t it = 0; it < params.max_iterations; ++it) {
        if (fx <= params.objective_tolerance) {
            report.status = "objective_tolerance";
            break;
        }
        const auto g = gradient_j1(qot, x, params.fd_step_db);
        double gnorm = 0.0;
        for (double v : g) gnorm += v * v;
        gnorm = std::sqrt(gnorm);
        if (gnorm <= params.gradient_tolerance) {
            report.status = "gradient_tolerance";
            break;
        }
        const auto d = descent_direction(g);

        // Warm-started backtracking: try twice the last accepted step first.
        double t = std::min(params.initial_step_db, 2.0 * step);
        bool accepted = false;
        std::size_t backtracks = 0;
        double ft = fx;
        for (; backtracks <= params.max_backtracks && t >= params.min_step_db; ++backtracks) {
            double decrease = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                trial[i] = std::clamp(x[i] + t * d[i], lo, hi);
                decrease += g[i] * (trial[i] - x[i]);
            }
            ft = qot.j1_dbm(trial);
            if (ft <= fx + params.sufficient_decrease * decrease && ft < fx) {
                accepted = true;
                break;
            }
            t *= params.shrink;
        }
        if (!accepted) {
            report.status = "line_search_stall";
            break;
        }
        total_backtracks += backtracks;
        step = t;
        x = trial;
        fx = ft;
        report.power_trace_dbm.push_back(x);
    }

    report.iterations = report.power_trace_dbm.size();
    report.mean_backtracks =
        report.iterations ? static_cast<double>(total_backtracks) / static_cast<double>(report.iterations) : 0.0;
    report.final_powers_dbm = x;
    report.flops = flops(FlopModel{FlopAlgorithm::Gd, static_cast<double>(qot.size()), 0.0, 0.0,
                                   static_cast<double>(report.iterations), report.mean_backtracks,
                                   static_cast<double>(qot.network().route_element_sum())});
    finish_report(report, qot, reference_dbm);
    return report;
}

}  // namespace eonpower
