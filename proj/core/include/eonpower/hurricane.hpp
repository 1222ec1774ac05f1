#pragma once

#include "eonpower/qot.hpp"
#include "eonpower/run_report.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace eonpower {

enum class HurricaneVariant { Chaotic, Uniform };

/// Eye replacement rule. Pressure: strictly lower pressure wins.
/// PressureAndMargin: also refuses moves that deepen the SNR shortfall.
enum class Acceptance { Pressure, PressureAndMargin };

struct HurricaneParams {
    std::size_t parcels = 132;         // K
    std::size_t iterations = 180;      // N_f
    double r0 = 5.8318e-6;             // initial radial increment, dB
    double omega = 1.6975;             // tangential velocity, rad
    double mu = 4.0;                   // logistic control parameter
    double upsilon = 1.0;              // pressure weight
    HurricaneVariant variant = HurricaneVariant::Chaotic;
    Acceptance acceptance = Acceptance::PressureAndMargin;
    std::uint64_t seed = 1;
    /// Iterations between choosing an eye and the transmitters applying it.
    /// Zero models a fully compensated control loop.
    std::size_t actuation_delay = 0;
    /// Replaces the per-parcel draw when set: (parcel k, iteration n) -> z.
    std::function<double(std::size_t, std::size_t)> z_source;

    void validate() const;

    [[nodiscard]] static HurricaneParams chso();
    [[nodiscard]] static HurricaneParams hso();
};

inline constexpr double kOmegaMin = 1e-4 * 3.14159265358979323846;
inline constexpr double kOmegaMax = 2.0 * 3.14159265358979323846;

[[nodiscard]] double logistic_step(double z, double mu) noexcept;

/// r0 * exp(z * theta).
[[nodiscard]] double spiral_radius(double r0, double z, double theta) noexcept;

/// First of the two channels moved by parcel k (1-based) among m channels, 0-based.
[[nodiscard]] std::size_t parcel_channel(std::size_t k, std::size_t m);

/// Candidate = eye with channels (i, i+1) displaced by r*cos(angle), r*sin(angle), in dB.
void parcel_update(std::span<const double> eye_dbm, std::size_t k, double radius, double angle,
                   std::span<double> candidate_dbm);

/// Angle after an unsuccessful move.
[[nodiscard]] double angular_update(double theta, double omega, double radius, double p_max, double z) noexcept;

struct ParcelState {
    double theta_initial = 0.0;
    double theta = 0.0;
    double z = 0.5;
    double radius = 0.0;
    std::mt19937_64 rng;
};

/// Restarts a parcel's spiral after it left the power box.
void boundary_reset(ParcelState& parcel) noexcept;

/// Draws a starting value in (0, 1) away from the logistic map's fixed and
/// absorbing points.
[[nodiscard]] double initial_chaos_value(std::mt19937_64& rng);

struct PressureSample {
    double pressure = 0.0;
    double shortfall = 0.0;    // margin_shortfall of the psi behind the pressure
};

using PressureFn = std::function<PressureSample(std::span<const double> powers_dbm)>;

/// Pressure and shortfall from exact QoT.
[[nodiscard]] PressureSample exact_pressure(const QotEvaluator& qot, std::span<const double> powers_dbm);

/// Stateful search. step() runs one outer iteration over all K parcels with
/// the eye replaced as soon as a parcel is accepted. Every parcel that stays
/// inside the power box advances its spiral, so each spiral sweeps radii from
/// r0 up to the box size before a boundary reset restarts it.
class HurricaneSearch {
public:
    HurricaneSearch(HurricaneParams params, double p_min_dbm, double p_max_dbm);

    void init(std::span<const double> p0_dbm);
    /// Continues with a different channel set; parcels keep their spiral state.
    void reset_dimension(std::span<const double> eye_dbm);
    void step(const PressureFn& pressure);

    [[nodiscard]] const std::vector<double>& eye() const noexcept { return eye_; }
    [[nodiscard]] double eye_pressure() const noexcept { return eye_pressure_; }
    [[nodiscard]] std::size_t iteration() const noexcept { return iteration_; }
    [[nodiscard]] std::size_t candidate_evaluations() const noexcept { return candidate_evals_; }
    [[nodiscard]] std::size_t eye_evaluations() const noexcept { return eye_evals_; }
    [[nodiscard]] const std::vector<ParcelState>& parcels() const noexcept { return parcels_; }
    [[nodiscard]] const HurricaneParams& params() const noexcept { return params_; }

private:
    double next_z(std::size_t k);

    HurricaneParams params_;
    double p_min_;
    double p_max_;
    std::vector<double> eye_;
    double eye_pressure_ = 0.0;
    double eye_shortfall_ = 0.0;
    std::vector<ParcelState> parcels_;
    std::vector<double> candidate_;
    std::size_t iteration_ = 0;
    std::size_t candidate_evals_ = 0;
    std::size_t eye_evals_ = 0;
};

/// Runs the search on exact QoT with pressure = upsilon * J1. With a reference
/// the report carries NMSE and power-penalty metrics against it.
[[nodiscard]] RunReport optimize(const QotEvaluator& qot, const HurricaneParams& params,
                                 std::span<const double> p0_dbm,
                                 std::optional<std::span<const double>> reference_dbm = std::nullopt);

/// Same as optimize() but the search sees `pressure` (for example monitored
/// SNRs) while the report is scored on the exact QoT of `truth`.
/// before_step, if set, runs ahead of every iteration with its 1-based index.
[[nodiscard]] RunReport optimize_with(const QotEvaluator& truth, const HurricaneParams& params,
                                      std::span<const double> p0_dbm, const PressureFn& pressure,
                                      std::optional<std::span<const double>> reference_dbm = std::nullopt,
                                      const std::function<void(std::size_t)>& before_step = {});

/// Fills the QoT-derived fields of a report from its power trace.
void finish_report(RunReport& report, const QotEvaluator& qot, std::optional<std::span<const double>> reference_dbm);

}  // namespace eonpower
