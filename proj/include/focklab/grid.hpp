#pragma once

#include <functional>
#include <memory>

#include "focklab/linalg.hpp"

namespace focklab {

enum class Dispersion {
    relativistic,       // w(k) = sqrt(k^2 + m^2)
    massless,           // w(k) = |k|; the grid must avoid k = 0
    modified_massless   // w(k) = |k| for |k| >= m, m/2 + k^2/(2m) below
};

// Uniform one-dimensional momentum grid carrying the one-particle data: the
// dispersion, its derivative, and the position observable y = i d/dk realized
// as i times the antisymmetric central-difference stencil (Hermitian).
// Mode amplitudes absorb sqrt(dk), so the discrete inner product is the plain
// coordinate sum.
class ModeGrid {
  public:
    static ModeGrid build(double k_min, double k_max, int n_modes, Dispersion kind,
                          double mass_param);

    int n_modes() const { return static_cast<int>(k_.size()); }
    double dk() const { return dk_; }
    double mass_param() const { return mass_param_; }
    double mass_gap() const { return mass_gap_; }  // min over the grid of w
    Dispersion kind() const { return kind_; }

    const RVec& k() const { return k_; }
    const RVec& omega() const { return omega_; }
    const RVec& grad_omega() const { return grad_omega_; }

    double omega_at(double k) const;
    double grad_omega_at(double k) const;

    const Mat& y_op() const { return y_op_; }
    Mat omega_op() const { return omega_.cast<cplx>().asDiagonal(); }
    Mat grad_omega_op() const { return grad_omega_.cast<cplx>().asDiagonal(); }

    // f(y_op) through the cached eigendecomposition of the stencil.
    Mat y_fn(const std::function<double(double)>& f) const;

    // Largest time before the discrete mode spectrum realigns: the revival
    // time 2*pi / (largest adjacent gap of the sorted frequencies), capped by
    // one period of the slowest mode.
    double recurrence_estimate() const;

  private:
    RVec k_, omega_, grad_omega_;
    double dk_ = 0.0, mass_param_ = 0.0, mass_gap_ = 0.0;
    Dispersion kind_ = Dispersion::relativistic;
    Mat y_op_;
    std::shared_ptr<Eigen::SelfAdjointEigenSolver<Mat>> y_eig_;
};

}  // namespace focklab
