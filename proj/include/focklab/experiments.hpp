#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "focklab/dynamics.hpp"
#include "focklab/spectral.hpp"

namespace focklab {

// Run configuration shared by the command-line driver and the acceptance
// harness.  Zero / empty fields mean "use the experiment's pinned default";
// every experiment is self-contained and passes its own checks when run with
// a default-constructed config.
struct ExperimentConfig {
    std::string model;       // spin_boson | infrared | one_sided | free
    double coupling = -1.0;  // < 0: experiment default
    int n_modes = 0;
    int n_max = 0;
    double t_min = 0.0;
    double t_max = 0.0;
    int samples = 0;
    double ir_window_scale = 0.0;  // infrared model only; checked against the amplitudes
    std::uint64_t seed = 1;
    std::map<std::string, double> tolerances;

    double tol(const std::string& name, double fallback) const;
    double pick(double value, double fallback) const;
    int pick(int value, int fallback) const;
};

struct CheckRow {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct NamedTrace {
    std::string name;
    Trace trace;
};

struct ExperimentResult {
    std::string name;
    std::vector<CheckRow> rows;
    std::vector<NamedTrace> traces;

    bool passed() const;
};

// Stock models used across the experiments.
Model make_spin_boson(double g, int n_modes = 6, int n_max = 2, double gap = 0.9);
Model make_infrared(double g, int n_modes = 10, int n_max = 2, double m = 0.3,
                    double atom_gap = 0.8);
Model make_one_sided_decay(double g, int n_modes = 12, int n_max = 2);
Model make_free_field(const ModeGrid& grid, int n_max);

ExperimentResult run_algebra(const ExperimentConfig& cfg);
ExperimentResult run_spectrum(const ExperimentConfig& cfg);
ExperimentResult run_virial(const ExperimentConfig& cfg);
ExperimentResult run_mourre(const ExperimentConfig& cfg);
ExperimentResult run_poscomm(const ExperimentConfig& cfg);
ExperimentResult run_fgr(const ExperimentConfig& cfg);
ExperimentResult run_fields(const ExperimentConfig& cfg);
ExperimentResult run_waveop(const ExperimentConfig& cfg);
ExperimentResult run_wobs(const ExperimentConfig& cfg);
ExperimentResult run_deift_simon(const ExperimentConfig& cfg);
ExperimentResult run_relax(const ExperimentConfig& cfg);
ExperimentResult run_propcheck(const ExperimentConfig& cfg);
ExperimentResult run_sfunc(const ExperimentConfig& cfg);

using ExperimentFn = ExperimentResult (*)(const ExperimentConfig&);
const std::vector<std::pair<std::string, ExperimentFn>>& experiment_registry();

// Model used for the hypothesis echo block of a run manifest.
Model manifest_model(const ExperimentConfig& cfg);

}  // namespace focklab
