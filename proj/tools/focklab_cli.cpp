// Configuration-driven runner: every experiment suite as a subcommand, with a
// run manifest, one CSV per trace, and a plain-text summary table.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <json.hpp>

#include "focklab/experiments.hpp"

using namespace focklab;
using nlohmann::json;

namespace {

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    ExperimentConfig cfg;
    try {
        for (auto& [key, val] : j.items()) {
            if (key == "model")
                cfg.model = val.get<std::string>();
            else if (key == "coupling")
                cfg.coupling = val.get<double>();
            else if (key == "n_modes")
                cfg.n_modes = val.get<int>();
            else if (key == "n_max")
                cfg.n_max = val.get<int>();
            else if (key == "t_min")
                cfg.t_min = val.get<double>();
            else if (key == "t_max")
                cfg.t_max = val.get<double>();
            else if (key == "samples")
                cfg.samples = val.get<int>();
            else if (key == "ir_window_scale")
                cfg.ir_window_scale = val.get<double>();
            else if (key == "seed")
                cfg.seed = val.get<std::uint64_t>();
            else if (key == "tolerances")
                for (auto& [tname, tval] : val.items())
                    cfg.tolerances[tname] = tval.get<double>();
            else
                throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    if (!cfg.model.empty() && cfg.model != "spin_boson" && cfg.model != "infrared" &&
        cfg.model != "one_sided" && cfg.model != "free")
        throw std::invalid_argument("config: unknown model '" + cfg.model + "'");
    return cfg;
}

json echo_config(const ExperimentConfig& cfg) {
    json j;
    j["model"] = cfg.model;
    j["coupling"] = cfg.coupling;
    j["n_modes"] = cfg.n_modes;
    j["n_max"] = cfg.n_max;
    j["t_min"] = cfg.t_min;
    j["t_max"] = cfg.t_max;
    j["samples"] = cfg.samples;
    j["ir_window_scale"] = cfg.ir_window_scale;
    j["seed"] = cfg.seed;
    j["tolerances"] = json::object();
    for (auto& [k, v] : cfg.tolerances) j["tolerances"][k] = v;
    return j;
}

void write_trace_csv(const std::filesystem::path& path, const Trace& tr) {
    std::ofstream out(path);
    out << "t,value_re,value_im,cauchy_increment,fitted_slope\n";
    char line[160];
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        double cauchy = i < tr.cauchy.size() ? tr.cauchy[i] : 0.0;
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", tr.t[i],
                      tr.value[i].real(), tr.value[i].imag(), cauchy, tr.fitted_slope);
        out << line;
    }
}

void print_summary(std::ostream& os, const ExperimentResult& res) {
    os << "experiment: " << res.name << "\n";
    for (const auto& row : res.rows)
        os << "  " << (row.passed ? "pass" : "FAIL") << "  " << row.name << "  ("
           << row.detail << ")\n";
    os << (res.passed() ? "all checks passed" : "CHECK FAILURES") << "\n";
}

int run_one(const std::string& name, ExperimentFn fn, const ExperimentConfig& cfg,
            const std::string& out_dir) {
    // The manifest model exercises config validation (amplitude windows,
    // dimension caps) before any experiment work starts.
    auto model = manifest_model(cfg);
    auto echoes = hypothesis_echoes(model);
    auto res = fn(cfg);

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        json manifest;
        manifest["experiment"] = name;
        manifest["config"] = echo_config(cfg);
        manifest["hypotheses"] = json::array();
        for (const auto& e : echoes)
            manifest["hypotheses"].push_back(
                {{"name", e.name}, {"status", e.status}, {"detail", e.detail}});
        manifest["checks"] = json::array();
        for (const auto& r : res.rows)
            manifest["checks"].push_back(
                {{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        std::ofstream(std::filesystem::path(out_dir) / "manifest.json") << manifest.dump(2)
                                                                        << "\n";
        for (const auto& nt : res.traces)
            write_trace_csv(std::filesystem::path(out_dir) / (nt.name + ".csv"), nt.trace);
        std::ofstream summary(std::filesystem::path(out_dir) / "summary.txt");
        print_summary(summary, res);
    }
    print_summary(std::cout, res);
    return res.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite Fock-space laboratory: algebra, spectra, and scattering checks"};
    app.require_subcommand(0, 1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    int threads = 0;
    bool list_checks = false;
    app.add_flag("--list-checks", list_checks, "List the experiment suites and exit");

    std::string chosen;
    for (const auto& [name, fn] : experiment_registry()) {
        auto* sub = app.add_subcommand(name, "Run the " + name + " suite");
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--out", out_dir, "Directory for manifest, CSV traces, summary");
        sub->add_option("--seed", seed, "Override the config seed");
        sub->add_option("--threads", threads, "Eigen thread count");
        sub->callback([&chosen, name = name] { chosen = name; });
    }

    CLI11_PARSE(app, argc, argv);

    if (list_checks) {
        for (const auto& [name, fn] : experiment_registry()) std::cout << name << "\n";
        return 0;
    }
    if (chosen.empty()) {
        std::cerr << app.help();
        return 2;
    }

    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = parse_config(config_path);
        if (seed != 0) cfg.seed = seed;
        if (threads > 0) Eigen::setNbThreads(threads);
        auto& reg = experiment_registry();
        auto it = std::find_if(reg.begin(), reg.end(),
                               [&](const auto& p) { return p.first == chosen; });
        return run_one(chosen, it->second, cfg, out_dir);
    } catch (const TruncationError& e) {
        std::cerr << "truncation cap exceeded: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 2;
    }
}
