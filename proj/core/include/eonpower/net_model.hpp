#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eonpower {

/// Raised when a configuration document fails to parse or violates an invariant.
/// Carries the dotted field path and, when known, the 1-based source line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field_path, const std::string& message, int line = -1);

    [[nodiscard]] const std::string& field_path() const noexcept { return field_path_; }
    [[nodiscard]] int line() const noexcept { return line_; }

private:
    std::string field_path_;
    int line_;
};

// =============================================================================
// Modulation formats
// =============================================================================

enum class ModulationKind { PmBpsk, PmQpsk, Pm8Qam, Pm16Qam, Pm32Qam, Pm64Qam };

struct ModulationFormat {
    ModulationKind kind;
    std::string_view name;
    int spectral_efficiency;    // bits/s/Hz
    double snr_b2b_target_db;   // back-to-back SNR needed for the pre-FEC BER target
    int constellation_size;
};

/// The six polarization-multiplexed formats, ordered by spectral efficiency.
[[nodiscard]] std::span<const ModulationFormat> modulation_table() noexcept;
[[nodiscard]] const ModulationFormat& modulation(ModulationKind kind) noexcept;
[[nodiscard]] std::optional<ModulationFormat> find_modulation(std::string_view name) noexcept;

// =============================================================================
// Topology
// =============================================================================

/// Identifies one amplified fiber span: the directed link it sits on and its
/// position along that link. Two routes share a span iff their keys match.
struct SpanKey {
    int from_node = 0;
    int to_node = 0;
    int index = 0;

    auto operator<=>(const SpanKey&) const = default;
};

struct Span {
    SpanKey key;
    double length_km = 0.0;
    int connectors = 0;
    int splices = 0;
};

struct Route {
    std::string id;
    int source = 0;
    int destination = 0;
    std::vector<int> nodes;     // explicit node path, source first
    std::vector<Span> spans;
    int roadm_count = 0;

    [[nodiscard]] std::size_t span_count() const noexcept { return spans.size(); }
    [[nodiscard]] double length_km() const noexcept;
    [[nodiscard]] bool traverses(int node) const noexcept;
};

struct Lightpath {
    Route route;
    double demand_rate_gbps = 0.0;
    ModulationFormat modulation{};
    double bandwidth_hz = 0.0;          // demand rate / spectral efficiency
    double center_frequency_hz = 0.0;
    int grid_slot = 0;
};

/// Bandwidth occupied by a demand at a given spectral efficiency.
[[nodiscard]] double channel_bandwidth_hz(double demand_rate_gbps, int spectral_efficiency);

/// An ordered lightpath set plus the derived span-overlap matrix. Immutable
/// once built; subset() and replicate() return new validated networks.
class Network {
public:
    Network() = default;
    Network(std::vector<Lightpath> lightpaths, double channel_spacing_hz, double guard_band_hz);

    [[nodiscard]] std::size_t size() const noexcept { return lightpaths_.size(); }
    [[nodiscard]] bool empty() const noexcept { return lightpaths_.empty(); }
    [[nodiscard]] const std::vector<Lightpath>& lightpaths() const noexcept { return lightpaths_; }
    [[nodiscard]] const Lightpath& lightpath(std::size_t i) const { return lightpaths_.at(i); }
    [[nodiscard]] double channel_spacing_hz() const noexcept { return channel_spacing_hz_; }
    [[nodiscard]] double guard_band_hz() const noexcept { return guard_band_hz_; }

    /// Number of spans traversed by both lightpaths i and j.
    [[nodiscard]] int shared_spans(std::size_t i, std::size_t j) const;

    [[nodiscard]] std::optional<std::size_t> find(std::string_view route_id) const noexcept;

    /// Keeps the listed lightpaths (in the given order) and re-derives the overlap matrix.
    [[nodiscard]] Network subset(std::span<const std::size_t> keep) const;

    /// Sum over lightpaths of ROADM count plus span count.
    [[nodiscard]] long route_element_sum() const noexcept;

private:
    void validate() const;

    std::vector<Lightpath> lightpaths_;
    std::vector<int> shared_;   // row-major M x M
    double channel_spacing_hz_ = 50e9;
    double guard_band_hz_ = 6e9;
};

/// Copies the lightpath set `copies` times onto successive grid slots
/// (slot + c * M) so the copies share routes but not spectrum.
[[nodiscard]] Network replicate(const Network& base, std::size_t copies, double carrier_hz);

/// Assigns centre frequencies on the spacing grid around the carrier;
/// lower slots sit at lower frequencies.
[[nodiscard]] double grid_frequency_hz(int slot, double carrier_hz, double spacing_hz);

// =============================================================================
// Physical layer parameters
// =============================================================================

/// Begin-of-life / end-of-life endpoints of an ageing-dependent quantity.
struct AgeingPair {
    double bol = 0.0;
    double eol = 0.0;
};

/// Affine interpolation between BoL and EoL. Throws std::domain_error when tau
/// lies outside [tau0, tau_end].
[[nodiscard]] double interpolate_param(AgeingPair pair, double tau, double tau0, double tau_end);

enum class XciSpanMode { Shared, Own };

/// Every scalar the QoT model needs, evaluated at one network age.
struct PhysicalState {
    double tau_years = 0.0;
    double planck = 0.0;
    double carrier_hz = 0.0;
    double beta2_s2_per_km = 0.0;
    double gamma_per_w_km = 0.0;
    double alpha_db_per_km = 0.0;
    double connector_loss_db = 0.0;
    double splice_loss_db = 0.0;
    double edfa_nf_db = 0.0;
    double roadm_loss_db = 0.0;
    double transponder_margin_db = 0.0;
    double design_margin_db = 0.0;
    double nli_scale = 1.0;
    XciSpanMode xci_span_mode = XciSpanMode::Shared;
};

struct PhysicalParams {
    double ber_target = 4e-3;
    double p_min_dbm = -100.0;
    double p_max_dbm = 20.0;
    double planck = 6.6261e-34;         // J/Hz
    double carrier_hz = 193.55e12;
    double beta2_s2_per_km = 2.07e-23;  // magnitude, used verbatim
    double gamma_per_w_km = 1.3;
    AgeingPair alpha_db_per_km{0.22, 0.23};
    AgeingPair connector_loss_db{0.20, 0.30};
    AgeingPair splice_loss_db{0.30, 0.50};
    int connectors_per_span = 2;
    int splices_per_span = 2;
    AgeingPair edfa_nf_db{4.50, 5.50};
    AgeingPair roadm_loss_db{20.0, 23.0};
    AgeingPair transponder_margin_db{1.00, 1.50};
    AgeingPair design_margin_db{2.00, 1.00};
    double tau0_years = 0.0;
    double tau_end_years = 10.0;
    double lambda1 = 4e-3;              // lower residual-margin tolerance
    double lambda2 = 1e-3;              // upper residual-margin tolerance
    double a_pert_db = 1.0;
    double span_length_km = 100.0;
    /// Multiplies the SCI and XCI coefficients. 1.0 evaluates the GN formulas as written.
    double nli_scale = 1.0;
    XciSpanMode xci_span_mode = XciSpanMode::Shared;

    /// Throws ConfigError naming the offending field.
    void validate() const;

    [[nodiscard]] PhysicalState at(double tau_years) const;
};

// =============================================================================
// Configuration loading
// =============================================================================

struct LoadedNetwork {
    Network network;
    PhysicalParams physical;
};

/// Parses a YAML configuration document (sections: nodes, links, lightpaths,
/// physical, grid). Unknown top-level sections are ignored so that other
/// modules can keep their settings in the same file.
[[nodiscard]] LoadedNetwork load_network(std::string_view document);
[[nodiscard]] LoadedNetwork load_network_file(const std::filesystem::path& path);

/// Reads a whole file; throws ConfigError if it cannot be opened.
[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);

}  // namespace eonpower
