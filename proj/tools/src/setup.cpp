#include "eonpower/experiments.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace eonpower::experiments {

namespace {

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : -1; }

YAML::Node parse_document(std::string_view document) {
    try {
        return YAML::Load(std::string(document));
    } catch (const YAML::ParserException& e) {
        throw ConfigError("<document>", e.msg, e.mark.line >= 0 ? e.mark.line + 1 : -1);
    }
}

// Reads the keys of one mapping section, refusing keys it does not know.
class Section {
public:
    Section(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
        if (node_ && !node_.IsMap()) throw ConfigError(path_, "expected a mapping", line_of(node_));
    }

    template <typename T>
    void read(const char* key, T& value) {
        seen_.insert(key);
        if (!node_) return;
        const YAML::Node n = node_[key];
        if (!n) return;
        try {
            value = n.as<T>();
        } catch (const YAML::Exception&) {
            throw ConfigError(path_ + "." + key, "wrong type", line_of(n));
        }
    }

    void reject_unknown() const {
        if (!node_) return;
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!seen_.contains(key)) throw ConfigError(path_ + "." + key, "unknown key", line_of(kv.first));
        }
    }

    [[nodiscard]] int line(const char* key) const { return node_ && node_[key] ? line_of(node_[key]) : line_of(node_); }

private:
    YAML::Node node_;
    std::string path_;
    std::set<std::string> seen_;
};

void read_hurricane(const YAML::Node& node, const std::string& path, HurricaneParams& p) {
    Section s(node, path);
    s.read("parcels", p.parcels);
    s.read("iterations", p.iterations);
    s.read("r0", p.r0);
    s.read("omega", p.omega);
    s.read("mu", p.mu);
    s.read("upsilon", p.upsilon);
    s.read("actuation_delay", p.actuation_delay);
    std::string acceptance = p.acceptance == Acceptance::Pressure ? "pressure" : "pressure_and_margin";
    s.read("acceptance", acceptance);
    if (acceptance == "pressure") {
        p.acceptance = Acceptance::Pressure;
    } else if (acceptance == "pressure_and_margin") {
        p.acceptance = Acceptance::PressureAndMargin;
    } else {
        throw ConfigError(path + ".acceptance", "expected 'pressure' or 'pressure_and_margin'", s.line("acceptance"));
    }
    s.reject_unknown();
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what(), line_of(node));
    }
}

void read_gd(const YAML::Node& node, GdParams& p) {
    Section s(node, "optimizers.gd");
    s.read("max_iterations", p.max_iterations);
    s.read("sufficient_decrease", p.sufficient_decrease);
    s.read("shrink", p.shrink);
    s.read("gradient_tolerance", p.gradient_tolerance);
    s.read("fd_step_db", p.fd_step_db);
    s.read("objective_tolerance", p.objective_tolerance);
    s.read("initial_step_db", p.initial_step_db);
    s.read("min_step_db", p.min_step_db);
    s.read("max_backtracks", p.max_backtracks);
    s.reject_unknown();
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("optimizers.gd", e.what(), line_of(node));
    }
}

void read_ipo(const YAML::Node& node, IpoConfig& c) {
    Section s(node, "ipo");
    s.read("loops", c.loops);
    s.read("realizations", c.realizations);
    s.read("tol_r0", c.tol_r0);
    s.read("tol_omega", c.tol_omega);
    s.read("r0_log_lower", c.r0_log_lower);
    s.read("r0_log_upper", c.r0_log_upper);
    s.read("omega_lower", c.omega_lower);
    s.read("omega_upper", c.omega_upper);
    s.read("seed_base", c.seed_base);
    s.read("recenter_ratio", c.recenter_ratio);
    s.reject_unknown();
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("ipo", e.what(), line_of(node));
    }
}

void read_cpos(const YAML::Node& node, CposGrid& g) {
    Section s(node, "cpos");
    s.read("realizations", g.realizations);
    s.read("r0_values", g.r0_values);
    s.read("iteration_step", g.iteration_step);
    s.read("parcel_factors", g.parcel_factors);
    s.read("budgets", g.budgets);
    s.reject_unknown();
    if (g.realizations == 0) throw ConfigError("cpos.realizations", "must be at least 1", s.line("realizations"));
    if (g.iteration_step == 0) throw ConfigError("cpos.iteration_step", "must be at least 1", s.line("iteration_step"));
    if (g.r0_values.empty()) throw ConfigError("cpos.r0_values", "must not be empty", s.line("r0_values"));
    for (double r0 : g.r0_values) {
        if (!(r0 > 0.0) || !std::isfinite(r0)) throw ConfigError("cpos.r0_values", "values must be positive", s.line("r0_values"));
    }
    if (g.parcel_factors.empty()) throw ConfigError("cpos.parcel_factors", "must not be empty", s.line("parcel_factors"));
    if (g.budgets.empty()) throw ConfigError("cpos.budgets", "must not be empty", s.line("budgets"));
}

// Default Ps1 rows: 1e-8 .. 1e-4 at 1, 2 and 5 per decade.
std::vector<double> default_r0_grid() {
    std::vector<double> v;
    for (int e = -8; e < -4; ++e) {
        for (double m : {1.0, 2.0, 5.0}) v.push_back(m * std::pow(10.0, e));
    }
    v.push_back(1e-4);
    return v;
}

}  // namespace

std::string apply_overrides(std::string_view document, const std::vector<std::string>& overrides) {
    if (overrides.empty()) return std::string(document);
    YAML::Node root = parse_document(document);
    if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw PlanError("override '" + item + "' is not key=value");
        const std::string key = item.substr(0, eq);
        YAML::Node value;
        try {
            value = YAML::Load(item.substr(eq + 1));
        } catch (const YAML::Exception& e) {
            throw PlanError("override '" + item + "': " + e.msg);
        }
        std::vector<std::string> parts;
        for (std::size_t start = 0;;) {
            const auto dot = key.find('.', start);
            parts.push_back(key.substr(start, dot - start));
            if (dot == std::string::npos) break;
            start = dot + 1;
        }
        if (std::any_of(parts.begin(), parts.end(), [](const std::string& p) { return p.empty(); })) {
            throw PlanError("override '" + item + "' has an empty path component");
        }
        // yaml-cpp nodes are handles, so walking with reset() edits the tree in place.
        YAML::Node cursor = root;
        for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
            if (!cursor.IsMap() && !cursor.IsNull()) {
                throw PlanError("override '" + item + "': '" + parts[i] + "' is not inside a mapping");
            }
            YAML::Node next = cursor[parts[i]];
            if (!next.IsDefined() || next.IsNull()) cursor[parts[i]] = YAML::Node(YAML::NodeType::Map);
            YAML::Node child = cursor[parts[i]];
            cursor.reset(child);
        }
        if (!cursor.IsMap() && !cursor.IsNull()) {
            throw PlanError("override '" + item + "': parent of '" + parts.back() + "' is not a mapping");
        }
        cursor[parts.back()] = value;
    }
    YAML::Emitter emitter;
    emitter << root;
    return std::string(emitter.c_str()) + "\n";
}

OptimizerChoice Setup::optimizer(std::string_view name) const {
    OptimizerChoice c;
    try {
        c = OptimizerChoice::from_name(name);
    } catch (const std::invalid_argument& e) {
        throw PlanError(e.what());
    }
    if (c.kind == OptimizerKind::Chso) c.hurricane = chso;
    if (c.kind == OptimizerKind::Hso) c.hurricane = hso;
    c.gd = gd;
    return c;
}

Setup load_setup(std::string_view document) {
    Setup setup;
    setup.document = std::string(document);
    auto loaded = load_network(document);
    setup.network = std::move(loaded.network);
    setup.physical = std::move(loaded.physical);
    setup.scenario = parse_scenario(document);
    setup.scenario.validate(setup.physical);

    const YAML::Node root = parse_document(document);
    if (const YAML::Node o = root["optimizers"]) {
        Section s(o, "optimizers");
        YAML::Node chso, hso, gd;
        s.read("chso", chso);
        s.read("hso", hso);
        s.read("gd", gd);
        s.reject_unknown();
        // A default YAML::Node is null, not undefined, so absent sections stay null.
        if (!chso.IsNull()) read_hurricane(chso, "optimizers.chso", setup.chso);
        if (!hso.IsNull()) read_hurricane(hso, "optimizers.hso", setup.hso);
        if (!gd.IsNull()) read_gd(gd, setup.gd);
    }
    setup.chso.variant = HurricaneVariant::Chaotic;
    setup.hso.variant = HurricaneVariant::Uniform;
    if (const YAML::Node n = root["ipo"]) read_ipo(n, setup.ipo);

    setup.cpos.r0_values = default_r0_grid();
    for (std::size_t w = 1; w <= 20; ++w) setup.cpos.parcel_factors.push_back(w);
    for (std::size_t b = 100; b <= 500; b += 50) setup.cpos.budgets.push_back(b);
    read_cpos(root["cpos"], setup.cpos);
    return setup;
}

Setup load_setup_file(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    return load_setup(apply_overrides(read_text_file(path), overrides));
}

std::vector<double> flat_start(const Network& network) { return std::vector<double>(network.size(), 0.0); }

void ExperimentPlan::validate() const {
    if (std::find(std::begin(kExperimentNames), std::end(kExperimentNames), experiment) == std::end(kExperimentNames)) {
        throw PlanError("unknown experiment '" + experiment + "'");
    }
    if (config.empty()) throw PlanError("no configuration file given");
    if (seeds.empty()) throw PlanError("seed list is empty");
    if (out.empty()) throw PlanError("no output directory given");
    if (std::filesystem::exists(out) && !std::filesystem::is_directory(out)) {
        throw PlanError("output path '" + out.string() + "' is not a directory");
    }

    std::set<std::string> allowed;
    if (experiment == "allocate") allowed = {"chso", "hso", "gd", "none"};
    if (experiment == "ipo" || experiment == "cpos" || experiment == "pareto") allowed = {"chso", "hso"};
    if (experiment == "opm-noise") allowed = {"chso", "hso"};
    if (experiment == "ageing" || experiment == "perturbation") allowed = {"chso", "hso", "none"};
    if (experiment == "complexity") allowed = {"chso", "hso", "gd"};
    for (const auto& a : algorithms) {
        if (!allowed.contains(a)) throw PlanError("algorithm '" + a + "' is not available for " + experiment);
    }
    if ((experiment == "allocate" || experiment == "opm-noise") && taus.size() > 1) {
        throw PlanError(experiment + " takes a single --tau value");
    }
    for (double t : taus) {
        if (!std::isfinite(t) || t < 0.0) throw PlanError("tau values must be finite and non-negative");
    }
    for (const auto& s : scenarios) {
        if (s != "A" && s != "B" && s != "C") throw PlanError("unknown scenario '" + s + "' (expected A, B or C)");
    }
}

}  // namespace eonpower::experiments
