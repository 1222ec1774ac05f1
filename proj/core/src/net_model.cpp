#include "eonpower/net_model.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace eonpower {

namespace {

std::string format_config_error(const std::string& path, const std::string& message, int line) {
    std::ostringstream os;
    os << path;
    if (line >= 0) os << " (line " << line << ")";
    os << ": " << message;
    return os.str();
}

constexpr std::array<ModulationFormat, 6> kModulations{{
    {ModulationKind::PmBpsk, "PM-BPSK", 2, 5.50, 2},
    {ModulationKind::PmQpsk, "PM-QPSK", 4, 8.50, 4},
    {ModulationKind::Pm8Qam, "PM-8QAM", 6, 12.50, 8},
    {ModulationKind::Pm16Qam, "PM-16QAM", 8, 15.15, 16},
    {ModulationKind::Pm32Qam, "PM-32QAM", 10, 18.15, 32},
    {ModulationKind::Pm64Qam, "PM-64QAM", 12, 21.10, 64},
}};

}  // namespace

ConfigError::ConfigError(std::string field_path, const std::string& message, int line)
    : std::runtime_error(format_config_error(field_path, message, line)),
      field_path_(std::move(field_path)),
      line_(line) {}

std::span<const ModulationFormat> modulation_table() noexcept { return kModulations; }

const ModulationFormat& modulation(ModulationKind kind) noexcept {
    return kModulations[static_cast<std::size_t>(kind)];
}

std::optional<ModulationFormat> find_modulation(std::string_view name) noexcept {
    for (const auto& m : kModulations) {
        if (m.name == name) return m;
    }
    return std::nullopt;
}

double Route::length_km() const noexcept {
    double total = 0.0;
    for (const auto& s : spans) total += s.length_km;
    return total;
}

bool Route::traverses(int node) const noexcept {
    return std::find(nodes.begin(), nodes.end(), node) != nodes.end();
}

double channel_bandwidth_hz(double demand_rate_gbps, int spectral_efficiency) {
    if (spectral_efficiency <= 0) throw std::invalid_argument("spectral efficiency must be positive");
    return demand_rate_gbps * 1e9 / static_cast<double>(spectral_efficiency);
}

double grid_frequency_hz(int slot, double carrier_hz, double spacing_hz) {
    return carrier_hz + static_cast<double>(slot) * spacing_hz;
}

// =============================================================================
// Network
// =============================================================================

Network::Network(std::vector<Lightpath> lightpaths, double channel_spacing_hz, double guard_band_hz)
    : lightpaths_(std::move(lightpaths)),
      channel_spacing_hz_(channel_spacing_hz),
      guard_band_hz_(guard_band_hz) {
    validate();

    const std::size_t m = lightpaths_.size();
    std::vector<std::set<SpanKey>> keys(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (const auto& s : lightpaths_[i].route.spans) keys[i].insert(s.key);
    }
    shared_.assign(m * m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        shared_[i * m + i] = static_cast<int>(lightpaths_[i].route.span_count());
        for (std::size_t j = i + 1; j < m; ++j) {
            int count = 0;
            for (const auto& k : keys[i]) count += static_cast<int>(keys[j].count(k));
            shared_[i * m + j] = count;
            shared_[j * m + i] = count;
        }
    }
}

void Network::validate() const {
    if (!(channel_spacing_hz_ > 0.0)) throw ConfigError("grid.spacing_ghz", "must be positive");
    if (guard_band_hz_ < 0.0) throw ConfigError("grid.guard_ghz", "must be non-negative");

    std::set<int> slots;
    std::set<std::string> ids;
    for (std::size_t i = 0; i < lightpaths_.size(); ++i) {
        const auto& lp = lightpaths_[i];
        const std::string path = "lightpaths[" + std::to_string(i) + "]";
        if (!ids.insert(lp.route.id).second) throw ConfigError(path + ".id", "duplicate route id '" + lp.route.id + "'");
        if (!slots.insert(lp.grid_slot).second) {
            throw ConfigError(path + ".slot", "duplicate channel grid slot " + std::to_string(lp.grid_slot));
        }
        if (!(lp.demand_rate_gbps > 0.0)) throw ConfigError(path + ".rate_gbps", "must be positive");
        if (!(lp.bandwidth_hz > 0.0)) throw ConfigError(path + ".bandwidth", "must be positive");
        if (lp.bandwidth_hz + guard_band_hz_ > channel_spacing_hz_ * (1.0 + 1e-12)) {
            throw ConfigError(path, "bandwidth plus guard band exceeds the channel spacing");
        }
        if (lp.route.spans.empty() && lp.route.nodes.size() > 1) {
            throw ConfigError(path + ".path", "route has nodes but no spans");
        }
        for (const auto& s : lp.route.spans) {
            if (!(s.length_km > 0.0)) throw ConfigError(path + ".path", "span lengths must be positive");
            if (s.connectors < 0 || s.splices < 0) throw ConfigError(path + ".path", "negative connector/splice count");
        }
        if (lp.route.roadm_count < 0) throw ConfigError(path + ".roadms", "must be non-negative");
    }
}

int Network::shared_spans(std::size_t i, std::size_t j) const {
    const std::size_t m = size();
    if (i >= m || j >= m) throw std::out_of_range("lightpath index out of range");
    return shared_[i * m + j];
}

std::optional<std::size_t> Network::find(std::string_view route_id) const noexcept {
    for (std::size_t i = 0; i < lightpaths_.size(); ++i) {
        if (lightpaths_[i].route.id == route_id) return i;
    }
    return std::nullopt;
}

Network Network::subset(std::span<const std::size_t> keep) const {
    std::vector<Lightpath> kept;
    kept.reserve(keep.size());
    for (std::size_t idx : keep) kept.push_back(lightpath(idx));
    return Network(std::move(kept), channel_spacing_hz_, guard_band_hz_);
}

long Network::route_element_sum() const noexcept {
    long total = 0;
    for (const auto& lp : lightpaths_) {
        total += lp.route.roadm_count + static_cast<long>(lp.route.span_count());
    }
    return total;
}

Network replicate(const Network& base, std::size_t copies, double carrier_hz) {
    const auto m = static_cast<int>(base.size());
    std::vector<Lightpath> out;
    out.reserve(base.size() * copies);
    for (std::size_t c = 0; c < copies; ++c) {
        for (const auto& lp : base.lightpaths()) {
            Lightpath copy = lp;
            if (c > 0) copy.route.id = lp.route.id + "#" + std::to_string(c);
            copy.grid_slot = lp.grid_slot + static_cast<int>(c) * m;
            copy.center_frequency_hz = grid_frequency_hz(copy.grid_slot, carrier_hz, base.channel_spacing_hz());
            out.push_back(std::move(copy));
        }
    }
    return Network(std::move(out), base.channel_spacing_hz(), base.guard_band_hz());
}

// =============================================================================
// Physical parameters
// =============================================================================

double interpolate_param(AgeingPair pair, double tau, double tau0, double tau_end) {
    if (!(tau_end > tau0)) throw std::domain_error("network lifetime must be positive");
    if (tau < tau0 || tau > tau_end) throw std::domain_error("tau outside the network lifetime");
    if (tau == tau_end) return pair.eol;
    return pair.bol + (pair.eol - pair.bol) * (tau - tau0) / (tau_end - tau0);
}

void PhysicalParams::validate() const {
    auto require = [](bool ok, const char* field, const char* what) {
        if (!ok) throw ConfigError(std::string("physical.") + field, what);
    };
    require(ber_target > 0.0 && ber_target < 0.5, "ber_target", "must lie in (0, 0.5)");
    require(p_min_dbm < p_max_dbm, "p_min_dbm", "must be below p_max_dbm");
    require(planck > 0.0, "planck", "must be positive");
    require(carrier_hz > 0.0, "carrier_hz", "must be positive");
    require(beta2_s2_per_km != 0.0, "beta2", "must be non-zero");
    require(gamma_per_w_km >= 0.0, "gamma", "must be non-negative");
    require(alpha_db_per_km.bol > 0.0 && alpha_db_per_km.eol > 0.0, "alpha_db_per_km", "must be positive");
    require(connectors_per_span >= 0, "connectors_per_span", "must be non-negative");
    require(splices_per_span >= 0, "splices_per_span", "must be non-negative");
    require(tau0_years < tau_end_years, "tau_end_years", "must exceed tau0_years");
    require(lambda1 > 0.0, "lambda1", "must be positive");
    require(lambda2 > 0.0, "lambda2", "must be positive");
    require(span_length_km > 0.0, "span_length_km", "must be positive");
    require(nli_scale >= 0.0, "nli_scale", "must be non-negative");
}

PhysicalState PhysicalParams::at(double tau_years) const {
    auto lerp = [&](AgeingPair p) { return interpolate_param(p, tau_years, tau0_years, tau_end_years); };
    PhysicalState s;
    s.tau_years = tau_years;
    s.planck = planck;
    s.carrier_hz = carrier_hz;
    s.beta2_s2_per_km = beta2_s2_per_km;
    s.gamma_per_w_km = gamma_per_w_km;
    s.alpha_db_per_km = lerp(alpha_db_per_km);
    s.connector_loss_db = lerp(connector_loss_db);
    s.splice_loss_db = lerp(splice_loss_db);
    s.edfa_nf_db = lerp(edfa_nf_db);
    s.roadm_loss_db = lerp(roadm_loss_db);
    s.transponder_margin_db = lerp(transponder_margin_db);
    s.design_margin_db = lerp(design_margin_db);
    s.nli_scale = nli_scale;
    s.xci_span_mode = xci_span_mode;
    return s;
}

// =============================================================================
// YAML loading
// =============================================================================

namespace {

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : -1; }

template <typename T>
T as(const YAML::Node& n, const std::string& path) {
    if (!n || n.IsNull()) throw ConfigError(path, "missing value");
    try {
        return n.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(path, "wrong type", line_of(n));
    }
}

template <typename T>
T as_or(const YAML::Node& parent, const char* key, const std::string& path, T fallback) {
    const YAML::Node n = parent[key];
    if (!n) return fallback;
    return as<T>(n, path + "." + key);
}

AgeingPair pair_or(const YAML::Node& parent, const char* key, const std::string& path, AgeingPair fallback) {
    const YAML::Node n = parent[key];
    if (!n) return fallback;
    const std::string p = path + "." + key;
    if (n.IsScalar()) {
        const double v = as<double>(n, p);
        return {v, v};
    }
    if (!n.IsSequence() || n.size() != 2) throw ConfigError(p, "expected [bol, eol]", line_of(n));
    return {as<double>(n[0], p + "[0]"), as<double>(n[1], p + "[1]")};
}

PhysicalParams parse_physical(const YAML::Node& node) {
    PhysicalParams p;
    if (!node) return p;
    const std::string path = "physical";
    if (!node.IsMap()) throw ConfigError(path, "expected a mapping", line_of(node));
    p.ber_target = as_or(node, "ber_target", path, p.ber_target);
    p.p_min_dbm = as_or(node, "p_min_dbm", path, p.p_min_dbm);
    p.p_max_dbm = as_or(node, "p_max_dbm", path, p.p_max_dbm);
    p.planck = as_or(node, "planck", path, p.planck);
    p.carrier_hz = as_or(node, "carrier_hz", path, p.carrier_hz);
    p.beta2_s2_per_km = as_or(node, "beta2", path, p.beta2_s2_per_km);
    p.gamma_per_w_km = as_or(node, "gamma", path, p.gamma_per_w_km);
    p.alpha_db_per_km = pair_or(node, "alpha_db_per_km", path, p.alpha_db_per_km);
    p.connector_loss_db = pair_or(node, "connector_loss_db", path, p.connector_loss_db);
    p.splice_loss_db = pair_or(node, "splice_loss_db", path, p.splice_loss_db);
    p.connectors_per_span = as_or(node, "connectors_per_span", path, p.connectors_per_span);
    p.splices_per_span = as_or(node, "splices_per_span", path, p.splices_per_span);
    p.edfa_nf_db = pair_or(node, "edfa_nf_db", path, p.edfa_nf_db);
    p.roadm_loss_db = pair_or(node, "roadm_loss_db", path, p.roadm_loss_db);
    p.transponder_margin_db = pair_or(node, "transponder_margin_db", path, p.transponder_margin_db);
    p.design_margin_db = pair_or(node, "design_margin_db", path, p.design_margin_db);
    p.tau0_years = as_or(node, "tau0_years", path, p.tau0_years);
    p.tau_end_years = as_or(node, "tau_end_years", path, p.tau_end_years);
    p.lambda1 = as_or(node, "lambda1", path, p.lambda1);
    p.lambda2 = as_or(node, "lambda2", path, p.lambda2);
    p.a_pert_db = as_or(node, "a_pert_db", path, p.a_pert_db);
    p.span_length_km = as_or(node, "span_length_km", path, p.span_length_km);
    p.nli_scale = as_or(node, "nli_scale", path, p.nli_scale);
    const auto mode = as_or<std::string>(node, "xci_span_mode", path, "shared");
    if (mode == "shared") {
        p.xci_span_mode = XciSpanMode::Shared;
    } else if (mode == "own") {
        p.xci_span_mode = XciSpanMode::Own;
    } else {
        throw ConfigError(path + ".xci_span_mode", "expected 'shared' or 'own'", line_of(node["xci_span_mode"]));
    }
    try {
        p.validate();
    } catch (const ConfigError& e) {
        if (e.line() >= 0 || !node) throw;
        // Point the error at the offending key.
        const std::string& field = e.field_path();
        const std::string key = field.substr(field.rfind('.') + 1);
        const std::string what = e.what();
        const auto colon = what.find(": ");
        const std::string message = colon == std::string::npos ? what : what.substr(colon + 2);
        throw ConfigError(field, message, node[key] ? line_of(node[key]) : line_of(node));
    }
    return p;
}

struct LinkInfo {
    double km = 0.0;
};

}  // namespace

LoadedNetwork load_network(std::string_view document) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(document));
    } catch (const YAML::ParserException& e) {
        throw ConfigError("<document>", e.msg, e.mark.line >= 0 ? e.mark.line + 1 : -1);
    }
    if (!root || !root.IsMap()) throw ConfigError("<document>", "expected a mapping at top level");

    LoadedNetwork out;
    out.physical = parse_physical(root["physical"]);
    const PhysicalParams& phys = out.physical;

    double spacing_hz = 50e9;
    double guard_hz = 6e9;
    if (const YAML::Node grid = root["grid"]) {
        spacing_hz = as_or(grid, "spacing_ghz", "grid", 50.0) * 1e9;
        guard_hz = as_or(grid, "guard_ghz", "grid", 6.0) * 1e9;
    }

    std::set<int> nodes;
    if (const YAML::Node n = root["nodes"]) {
        if (!n.IsSequence()) throw ConfigError("nodes", "expected a list", line_of(n));
        for (std::size_t i = 0; i < n.size(); ++i) nodes.insert(as<int>(n[i], "nodes[" + std::to_string(i) + "]"));
    }

    std::map<std::pair<int, int>, LinkInfo> links;
    if (const YAML::Node l = root["links"]) {
        if (!l.IsSequence()) throw ConfigError("links", "expected a list", line_of(l));
        for (std::size_t i = 0; i < l.size(); ++i) {
            const std::string path = "links[" + std::to_string(i) + "]";
            const YAML::Node e = l[i];
            const int a = as<int>(e["from"], path + ".from");
            const int b = as<int>(e["to"], path + ".to");
            const double km = as<double>(e["km"], path + ".km");
            if (!(km > 0.0)) throw ConfigError(path + ".km", "must be positive", line_of(e));
            if (!nodes.empty() && (!nodes.count(a) || !nodes.count(b))) {
                throw ConfigError(path, "references an undeclared node", line_of(e));
            }
            if (a == b) throw ConfigError(path, "self-loop", line_of(e));
            const auto key = std::minmax(a, b);
            if (!links.emplace(std::pair{key.first, key.second}, LinkInfo{km}).second) {
                throw ConfigError(path, "duplicate link", line_of(e));
            }
        }
    }

    std::vector<Lightpath> lightpaths;
    if (const YAML::Node lps = root["lightpaths"]) {
        if (!lps.IsSequence()) throw ConfigError("lightpaths", "expected a list", line_of(lps));
        for (std::size_t i = 0; i < lps.size(); ++i) {
            const std::string path = "lightpaths[" + std::to_string(i) + "]";
            const YAML::Node e = lps[i];
            Lightpath lp;
            lp.route.id = as_or<std::string>(e, "id", path, "R" + std::to_string(i + 1));
            lp.route.source = as<int>(e["source"], path + ".source");
            lp.route.destination = as<int>(e["destination"], path + ".destination");
            const YAML::Node p = e["path"];
            if (!p || !p.IsSequence() || p.size() < 2) throw ConfigError(path + ".path", "expected at least two nodes", line_of(e));
            for (std::size_t k = 0; k < p.size(); ++k) lp.route.nodes.push_back(as<int>(p[k], path + ".path"));
            if (lp.route.nodes.front() != lp.route.source || lp.route.nodes.back() != lp.route.destination) {
                throw ConfigError(path + ".path", "must start at source and end at destination", line_of(p));
            }
            for (std::size_t k = 0; k + 1 < lp.route.nodes.size(); ++k) {
                const int a = lp.route.nodes[k];
                const int b = lp.route.nodes[k + 1];
                const auto key = std::minmax(a, b);
                const auto it = links.find({key.first, key.second});
                if (it == links.end()) {
                    throw ConfigError(path + ".path", "no link between nodes " + std::to_string(a) + " and " + std::to_string(b), line_of(p));
                }
                const double km = it->second.km;
                const int n_spans = std::max(1, static_cast<int>(std::ceil(km / phys.span_length_km - 1e-9)));
                for (int s = 0; s < n_spans; ++s) {
                    lp.route.spans.push_back(Span{SpanKey{a, b, s}, km / n_spans, phys.connectors_per_span, phys.splices_per_span});
                }
            }
            lp.route.roadm_count = as_or<int>(e, "roadms", path, static_cast<int>(lp.route.nodes.size()));
            lp.demand_rate_gbps = as<double>(e["rate_gbps"], path + ".rate_gbps");
            const auto mod_name = as<std::string>(e["modulation"], path + ".modulation");
            const auto mod = find_modulation(mod_name);
            if (!mod) throw ConfigError(path + ".modulation", "unknown modulation '" + mod_name + "'", line_of(e["modulation"]));
            lp.modulation = *mod;
            lp.bandwidth_hz = channel_bandwidth_hz(lp.demand_rate_gbps, mod->spectral_efficiency);
            lp.grid_slot = as_or<int>(e, "slot", path, static_cast<int>(i));
            lp.center_frequency_hz = grid_frequency_hz(lp.grid_slot, phys.carrier_hz, spacing_hz);
            lightpaths.push_back(std::move(lp));
        }
    }

    out.network = Network(std::move(lightpaths), spacing_hz, guard_hz);
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string(), "cannot open file");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

LoadedNetwork load_network_file(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    try {
        return load_network(text);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ":" + e.field_path(), e.what(), e.line());
    }
}

}  // namespace eonpower
