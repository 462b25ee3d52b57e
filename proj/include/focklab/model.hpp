#pragma once

#include <memory>
#include <string>
#include <vector>

#include "focklab/basis.hpp"
#include "focklab/grid.hpp"
#include "focklab/ops.hpp"
#include "focklab/split.hpp"

namespace focklab {

// Finite-level particle system (the "atom").
struct ParticleSystem {
    Mat k_op;    // Hermitian n x n
    RVec levels; // ascending eigenvalues
    Mat states;  // columns are eigenvectors

    static ParticleSystem make(const Mat& k_op, double herm_tol = 1e-10);
    int dim() const { return static_cast<int>(k_op.rows()); }
    double gap() const;  // distance from the lowest level to the rest
};

// Coupling functions G_x, one mode-amplitude vector per particle label, with
// sqrt(dk) absorbed so discrete sums realize the k-integrals.
struct FormFactor {
    std::vector<Vec> site_amplitudes;  // size = particle dim, each length n_modes
    bool infrared_window = false;      // amplitudes must vanish for |k| < window_scale
    double window_scale = 0.0;

    void validate(const ModeGrid& grid, int particle_dim) const;
};

// Coupled Hamiltonian H = K (x) 1 + 1 (x) dGamma(w) + g * Phi(G) on
// C^n (x) F, with Phi(G) = sum_x |x><x| (x) field(G_x).
class Model {
  public:
    static Model build(ParticleSystem part, ModeGrid grid, int n_max, FormFactor form,
                       double coupling, std::uint64_t dim_cap = 200000);

    const ParticleSystem& particle() const { return part_; }
    const ModeGrid& grid() const { return grid_; }
    const FockBasis& basis() const { return basis_; }
    const FormFactor& form() const { return form_; }
    double coupling() const { return g_; }

    int dim() const { return part_.dim() * basis_.dim(); }
    const Mat& hamiltonian() const { return h_; }
    const Mat& free_hamiltonian() const { return h0_; }
    const Mat& interaction() const { return phi_; }  // Phi(G) without the coupling

    // P (x) 1_F and 1_n (x) B.
    Mat lift_particle(const Mat& p) const;
    Mat lift_fock(const Mat& b) const;
    // sum_x |x><x| (x) field(G'_x) for modified amplitudes G'_x.
    Mat site_field(const std::vector<Vec>& amps) const;

    const EigenSystem& eig() const;  // cached eigendecomposition of H
    double ground_energy() const { return eig().vals(0); }

    // Smooth spectral weight chi(H in [lo, hi]) with edge width.
    Mat energy_window(double lo, double hi, double edge) const;

    // e^{-iHt} psi through the cached eigendecomposition.
    Vec evolve(double t, const Vec& psi) const;

    // Same model with the dispersion swapped out (used for the modified
    // massless comparison); shares particle, coupling, and truncation.
    Model with_grid(ModeGrid grid) const;

  private:
    ParticleSystem part_;
    ModeGrid grid_;
    FockBasis basis_;
    FormFactor form_;
    double g_ = 0.0;
    Mat h_, h0_, phi_;
    mutable std::shared_ptr<EigenSystem> eig_;
};

// Convenience constructors for the stock experiments.
Mat two_level(double gap);            // diag(0, gap)
Mat tunneling_two_level(double gap);  // same levels, eigenstates mixed in the site basis
// Gaussian envelope in |k| around center_k, sqrt(dk) absorbed; zeroed below
// cutoff_k when positive.
Vec gaussian_amplitudes(const ModeGrid& grid, double center_k, double width, double strength,
                        double cutoff_k = 0.0);
// Flat amplitude c sqrt(dk) on |k| >= cutoff_k.
Vec constant_amplitudes(const ModeGrid& grid, double strength, double cutoff_k = 0.0);

// One-particle conjugate operator a = (grad_w y + y grad_w) / 2 on the grid.
Mat mourre_one_body(const ModeGrid& grid);

struct MourreOps {
    Mat a;             // one-particle conjugate
    Mat conjugate;     // A = 1 (x) dGamma(a)
    Mat commutator;    // i[H, A] assembled as dGamma(|grad w|^2) - g Phi(i a G)
    Mat raw_commutator;  // i(HA - AH), the finite-matrix commutator
    Mat raw_rhs;       // 1 (x) dGamma(i[w, a]) - g Phi(i a G)
    double raw_identity_defect;  // ||raw_commutator - raw_rhs||
};
MourreOps mourre_ops(const Model& model);

// || i[w_mult, a] - |grad w|^2 || restricted to smooth vectors decays like
// dk^2; returns defects for a refinement sequence together with the fitted
// order (measured against Gaussian probe vectors).
struct StencilRefinement {
    std::vector<double> dk;
    std::vector<double> defect;
    double order;
};
StencilRefinement commutator_stencil_refinement(double k_min, double k_max, Dispersion kind,
                                                double mass_param,
                                                const std::vector<int>& mode_counts);

// Extended objects on C^n (x) (F (x) F) for the doubled dynamics.
struct ExtendedModel {
    const Model* base;
    std::shared_ptr<FockBasis> aux;      // second Fock factor (same grid modes)
    std::shared_ptr<FockBasis> doubled;  // 2M concatenated modes, same cutoff
    TensorBasis tensor;                  // joint truncation of F (x) F
    Mat h_ext;                           // H (x) 1 + 1 (x) dGamma(w)
    std::shared_ptr<EigenSystem> eig_ext;

    int dim() const { return base->particle().dim() * tensor.dim(); }
    Mat lift_fock_pair(const Mat& op_on_tensor) const;  // 1_n (x) op
    Mat lift_model(const Mat& op_on_model) const;       // (op on C^n (x) F) (x) 1
    Vec evolve(double t, const Vec& psi) const;
};
ExtendedModel extend(const Model& model);

// Hypothesis echoes for the run manifest.
struct HypothesisEcho {
    std::string name;
    std::string status;  // "pass", "fail", "n-a"
    std::string detail;
};
std::vector<HypothesisEcho> hypothesis_echoes(const Model& model);

}  // namespace focklab
