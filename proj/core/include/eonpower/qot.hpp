#pragma once

#include "eonpower/net_model.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace eonpower {

// Launch powers are linear watts in this header unless a name says dbm.

[[nodiscard]] double span_loss_db(const Span& span, const PhysicalState& state) noexcept;

/// Accumulated ASE power spectral density at the receiver, W/Hz.
[[nodiscard]] double ase_psd(const Lightpath& lightpath, const PhysicalState& state);

/// Self-channel interference PSD of channel i at launch power p_i (W/Hz).
[[nodiscard]] double sci_psd(const Network& network, std::size_t i, double power_w, const PhysicalState& state);

/// Cross-channel interference PSD of channel i given every channel's power.
[[nodiscard]] double xci_psd(const Network& network, std::size_t i, std::span<const double> powers_w,
                             const PhysicalState& state);

/// Linear GN-model SNR of channel i.
[[nodiscard]] double snr(const Network& network, std::size_t i, std::span<const double> powers_w,
                         const PhysicalState& state);

/// Subtracts design and transponder margins (dB) from a linear SNR.
[[nodiscard]] double snr_b2b(double snr_linear, const PhysicalState& state) noexcept;

[[nodiscard]] std::vector<double> residual_margin(const Network& network, std::span<const double> powers_w,
                                                  const PhysicalState& state);

/// Euclidean distance of the residual-margin vector from all-ones.
[[nodiscard]] double objective_j1(std::span<const double> psi) noexcept;

/// Summed shortfall of psi below the lower margin bound 1 - lambda1. Zero iff
/// every channel meets its SNR requirement.
[[nodiscard]] double margin_shortfall(std::span<const double> psi, double lambda1) noexcept;

/// Uncalibrated AWGN bit-error rate for a format at a linear SNR.
[[nodiscard]] double ber_awgn(ModulationKind kind, double snr_linear);

/// SNR multiplier that makes the AWGN curve hit ber_target exactly at the
/// format's back-to-back target.
[[nodiscard]] double ber_calibration(const ModulationFormat& format, double ber_target);

/// Calibrated BER. Nonpositive SNR gives 0.5.
[[nodiscard]] double ber(const ModulationFormat& format, double snr_b2b_linear, double ber_target = 4e-3);

struct ConstraintVerdict {
    std::vector<bool> snr_ok;     // residual margin within the lower tolerance of 1
    std::vector<bool> rate_ok;    // fixed modulation and rate: always true
    std::vector<bool> power_ok;   // launch power inside [p_min, p_max]
    bool feasible = true;

    [[nodiscard]] bool channel_feasible(std::size_t i) const { return snr_ok.at(i) && rate_ok.at(i) && power_ok.at(i); }
};

[[nodiscard]] ConstraintVerdict check_constraints(const Network& network, std::span<const double> powers_dbm,
                                                  const PhysicalParams& params, double tau_years);

struct QotBreakdown {
    std::vector<double> ase_psd;
    std::vector<double> sci_psd;
    std::vector<double> xci_psd;
    std::vector<double> snr;
    std::vector<double> snr_b2b;
    std::vector<double> psi;
    std::vector<double> ber;
    ConstraintVerdict constraints;
};

/// Precomputes every power-independent coefficient so one residual-margin
/// evaluation costs O(M^2). Immutable and safe to share between threads.
class QotEvaluator {
public:
    QotEvaluator(const Network& network, const PhysicalParams& params, double tau_years);

    [[nodiscard]] std::size_t size() const noexcept { return bandwidth_.size(); }
    [[nodiscard]] const PhysicalState& state() const noexcept { return state_; }
    [[nodiscard]] const PhysicalParams& params() const noexcept { return params_; }
    [[nodiscard]] const Network& network() const noexcept { return network_; }

    void psi_watts(std::span<const double> powers_w, std::span<double> psi) const;
    void psi_dbm(std::span<const double> powers_dbm, std::span<double> psi) const;
    [[nodiscard]] std::vector<double> psi_dbm(std::span<const double> powers_dbm) const;
    [[nodiscard]] double j1_dbm(std::span<const double> powers_dbm) const;

    [[nodiscard]] QotBreakdown breakdown_dbm(std::span<const double> powers_dbm) const;

private:
    Network network_;
    PhysicalParams params_;
    PhysicalState state_;
    std::vector<double> bandwidth_;
    std::vector<double> ase_;
    std::vector<double> sci_coef_;    // G_sci = sci_coef * p^3
    std::vector<double> xci_coef_;    // G_xci_i = p_i * sum_j xci_coef_ij * p_j^2, row-major
    std::vector<double> psi_scale_;   // margin factor over target, per channel
};

/// One row per channel with PSDs, SNRs, residual margin, BER and constraint flags.
void write_breakdown_csv(std::ostream& out, const Network& network, const QotBreakdown& breakdown);

}  // namespace eonpower
