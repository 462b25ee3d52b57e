#pragma once

#include "focklab/model.hpp"

namespace fixtures {

using namespace focklab;

// Massive spin-boson model: two-level atom in a relativistic mode band.
inline Model spin_boson(double g, int n_modes = 6, int n_max = 2, double gap = 0.9) {
    auto grid = ModeGrid::build(0.3, 1.8, n_modes, Dispersion::relativistic, 0.4);
    auto part = ParticleSystem::make(two_level(gap));
    FormFactor form;
    form.site_amplitudes = {gaussian_amplitudes(grid, 0.9, 0.5, 1.0),
                            gaussian_amplitudes(grid, 1.1, 0.4, 0.8)};
    return Model::build(part, grid, n_max, form, g);
}

// Massless model with an infrared window: coupling vanishes below |k| = m.
// The particle operator mixes the sites and the amplitudes carry opposite
// signs, so the field couples the atomic levels (needed for decay and
// relaxation to happen at all).
inline Model infrared(double g, int n_modes = 10, int n_max = 2, double m = 0.3,
                      double atom_gap = 0.8, double k_max = 1.95) {
    auto grid = ModeGrid::build(-k_max, k_max, n_modes, Dispersion::massless, m);
    auto part = ParticleSystem::make(tunneling_two_level(atom_gap));
    FormFactor form;
    form.infrared_window = true;
    form.window_scale = m;
    Vec envelope = gaussian_amplitudes(grid, atom_gap, 0.45, 1.0, m);
    form.site_amplitudes = {envelope, -envelope};
    return Model::build(part, grid, n_max, form, g);
}

}  // namespace fixtures
