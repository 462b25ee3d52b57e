#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "focklab/model.hpp"

namespace focklab {

struct GroundGap {
    double energy;
    double gap;
};
GroundGap ground_gap_check(const Model& model);

// Max over all eigenpairs of |<phi, i[H, A] phi>| with the finite-matrix
// commutator; vanishes on exact eigenvectors up to eigensolver residuals.
struct VirialReport {
    double max_residual;
    double conjugate_norm;  // ||A|| for scaling the tolerance
};
VirialReport virial_residual(const Model& model);

// Same statement for the infrared generator N - g Phi(i a G).
VirialReport massless_virial_residual(const Model& model);

// Eigenvalues whose eigenvectors live mostly on the vacuum leg (overlap with
// 1 (x) |vac><vac| above the threshold): the surviving point spectrum at
// finite truncation.
std::vector<double> bound_state_energies(const Model& model, double overlap_threshold = 0.5);

// Bound-state energies shifted by multiples of the mass gap, up to the top of
// the computed spectrum.
std::vector<double> threshold_set(const Model& model);

struct WindowReport {
    double lo, hi;
    int n_states;
    double min_quotient;  // of the compressed commutator dGamma(|grad w|^2) - g Phi(iaG)
    double free_oracle;   // min over window states of the grad^2-weighted quanta (g = 0)
};
// Throws std::invalid_argument if the window violates the margin against the
// threshold set or contains a classified eigenvalue.
WindowReport mourre_window_check(const Model& model, double lo, double hi, double margin);

// Maximal open intervals between forbidden points, shrunk by the margin.
std::vector<std::pair<double, double>> admissible_windows(const Model& model, double margin,
                                                          double min_width);

struct PositiveCommutatorReport {
    double lo, hi;
    int n_states;
    double min_quotient;          // of compressed N - g Phi(iaG)
    bool window_free_of_bound_states;
};
// Window (ground energy, first excited particle level - epsilon].
PositiveCommutatorReport positive_commutator_check(const Model& model, double epsilon);

// Second-order resonance width matrix of the particle level `upper`: sum over
// lower levels and modes of A* A against a normalized kernel of width eta at
// the Bohr frequency, linearly extrapolated in eta to zero width.
Mat fermi_golden_rule(const Model& model, int upper, const std::vector<double>& etas,
                      double level_tol = 1e-9);

// Population decay rate implied by the width matrix at coupling g (trace
// averaged over the level multiplicity).
double fgr_decay_rate(const Mat& width, double coupling);

struct DensityRankReport {
    int target_dim;    // states with dGamma(w) < energy_cut
    int sampled_rank;  // rank of sampled creation-product vectors
};
DensityRankReport density_rank_check(const FockBasis& basis, const ModeGrid& grid,
                                     double energy_cut, int oversample, std::uint64_t seed);

struct PsdReport {
    double min_eig;
    double scale;  // norm of the dominating side
};
// a H + b - N with a = 2 / mass parameter and b from component norms.
PsdReport number_energy_bound(const Model& model);
// N dGamma(a^2) - dGamma(a)^2 with the conjugate one-particle operator.
PsdReport conjugate_square_bound(const Model& model);
// c (y^2 + 1) - a^2 on one particle, and c dGamma(y^2+1)^2 - dGamma(a)^2,
// with c computed from the weighted norm of a^2.
struct PositionDominationReport {
    double c;
    PsdReport one_particle;
    PsdReport second_quantized;
};
PositionDominationReport conjugate_position_bound(const Model& model);

}  // namespace focklab
