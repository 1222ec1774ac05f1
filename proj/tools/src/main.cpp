// eonpower: runs one named experiment and writes its artifacts.
//
// Exit status: 0 success, 1 invalid command line or configuration, 2 failure while running.

#include "eonpower/experiments.hpp"
#include "eonpower/text.hpp"

#include <CLI/CLI.hpp>

#include <iostream>

namespace {

using eonpower::experiments::ExperimentPlan;
using eonpower::experiments::PlanError;

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    for (char c : text + ",") {
        if (c == ',') {
            if (!item.empty()) out.push_back(item);
            item.clear();
        } else if (c != ' ') {
            item.push_back(c);
        }
    }
    return out;
}

std::vector<double> parse_taus(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size()) throw PlanError("bad --tau value '" + item + "'");
        out.push_back(v);
    }
    return out;
}

struct RawOptions {
    std::string config = "configs/table3.cfg";
    std::string algo;
    std::string seeds = "1..100";
    std::string out = "results";
    std::string tau;
    std::vector<std::string> overrides;
    std::string scenarios;
    std::size_t workers = 0;
};

void add_common(CLI::App& sub, RawOptions& o) {
    sub.add_option("--config", o.config, "YAML network and experiment configuration")->capture_default_str();
    sub.add_option("--algo", o.algo, "algorithm or comma list: chso, hso, gd, none");
    sub.add_option("--seeds", o.seeds, "seed list such as 1..100 or 3,5,9")->capture_default_str();
    sub.add_option("--out", o.out, "output directory")->capture_default_str();
    sub.add_option("--tau", o.tau, "ageing time in years, or a comma list for ageing");
    sub.add_option("--override", o.overrides, "dotted.key=value applied to the configuration")->take_all();
    sub.add_option("--workers", o.workers, "worker threads, 0 = all cores")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Launch-power allocation experiments for elastic optical networks"};
    app.require_subcommand(1);
    RawOptions o;
    const std::pair<const char*, const char*> commands[] = {
        {"ipo", "tune r0 and omega by alternating golden-section search"},
        {"allocate", "run an optimizer over a seed set against the gradient-descent reference"},
        {"cpos", "success-probability surfaces over r0 x iteration and K x N_f"},
        {"pareto", "K x N_f Pareto frontier and flop-optimal trade-off"},
        {"opm-noise", "allocation under log-normal performance-monitor noise"},
        {"ageing", "penalty against per-tau references across the ageing schedule"},
        {"perturbation", "channel drops and a sinusoidal power perturbation"},
        {"complexity", "flop counts at scenarios A, B and C"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(*sub, o);
        if (std::string_view(name) == "complexity") {
            sub->add_option("--scenarios", o.scenarios, "comma list of loadings: A, B, C");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    ExperimentPlan plan;
    try {
        plan.experiment = app.get_subcommands().front()->get_name();
        plan.config = o.config;
        plan.algorithms = split_list(o.algo);
        try {
            plan.seeds = eonpower::parse_seed_list(o.seeds);
        } catch (const std::invalid_argument& e) {
            throw PlanError(std::string("bad --seeds: ") + e.what());
        }
        plan.out = o.out;
        plan.taus = parse_taus(o.tau);
        plan.overrides = o.overrides;
        plan.scenarios = split_list(o.scenarios);
        plan.workers = o.workers;
        plan.validate();
    } catch (const PlanError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    try {
        const auto files = eonpower::experiments::run(plan);
        std::cout << plan.experiment << ": wrote " << files.size() << " data files and manifest.json to "
                  << plan.out.string() << '\n';
        return 0;
    } catch (const PlanError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const eonpower::ConfigError& e) {
        if (e.field_path() == plan.config.string()) {
            std::cerr << "error: " << e.what() << '\n';
        } else {
            std::cerr << plan.config.string() << (plan.overrides.empty() ? "" : " (after overrides)") << ": "
                      << e.what() << '\n';
        }
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
