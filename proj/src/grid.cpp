#include "focklab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace focklab {

double ModeGrid::omega_at(double k) const {
    double m = mass_param_;
    switch (kind_) {
        case Dispersion::relativistic:
            return std::sqrt(k * k + m * m);
        case Dispersion::massless:
            return std::abs(k);
        case Dispersion::modified_massless:
            // Cubic Hermite fill-in on [0, m] with value m/2 and slope 0 at the
            // origin, C^1 match to |k| at |k| = m; it reduces to a parabola.
            return std::abs(k) >= m ? std::abs(k) : m / 2.0 + k * k / (2.0 * m);
    }
    throw std::logic_error("ModeGrid: unknown dispersion");
}

double ModeGrid::grad_omega_at(double k) const {
    double m = mass_param_;
    switch (kind_) {
        case Dispersion::relativistic:
            return k / std::sqrt(k * k + m * m);
        case Dispersion::massless:
            return k > 0 ? 1.0 : -1.0;
        case Dispersion::modified_massless:
            return std::abs(k) >= m ? (k > 0 ? 1.0 : -1.0) : k / m;
    }
    throw std::logic_error("ModeGrid: unknown dispersion");
}

ModeGrid ModeGrid::build(double k_min, double k_max, int n_modes, Dispersion kind,
                         double mass_param) {
    if (n_modes < 2) throw std::invalid_argument("ModeGrid: need at least two modes");
    if (!(k_max > k_min)) throw std::invalid_argument("ModeGrid: need k_max > k_min");
    if (!(mass_param > 0.0)) throw std::invalid_argument("ModeGrid: need mass_param > 0");

    ModeGrid g;
    g.kind_ = kind;
    g.mass_param_ = mass_param;
    g.dk_ = (k_max - k_min) / (n_modes - 1);
    g.k_.resize(n_modes);
    g.omega_.resize(n_modes);
    g.grad_omega_.resize(n_modes);
    for (int j = 0; j < n_modes; ++j) {
        g.k_(j) = k_min + j * g.dk_;
        g.omega_(j) = g.omega_at(g.k_(j));
        g.grad_omega_(j) = g.grad_omega_at(g.k_(j));
    }
    g.mass_gap_ = g.omega_.minCoeff();
    if (!(g.mass_gap_ > 0.0))
        throw std::invalid_argument("ModeGrid: dispersion not bounded below by a positive gap");

    g.y_op_ = Mat::Zero(n_modes, n_modes);
    for (int j = 0; j + 1 < n_modes; ++j) {
        g.y_op_(j, j + 1) = iu / (2.0 * g.dk_);
        g.y_op_(j + 1, j) = -iu / (2.0 * g.dk_);
    }
    return g;
}

Mat ModeGrid::y_fn(const std::function<double(double)>& f) const {
    auto* self = const_cast<ModeGrid*>(this);
    if (!y_eig_)
        self->y_eig_ = std::make_shared<Eigen::SelfAdjointEigenSolver<Mat>>(y_op_);
    const auto& es = *y_eig_;
    RVec fd(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < fd.size(); ++i) fd(i) = f(es.eigenvalues()(i));
    return es.eigenvectors() * fd.asDiagonal() * es.eigenvectors().adjoint();
}

double ModeGrid::recurrence_estimate() const {
    std::vector<double> w(omega_.data(), omega_.data() + omega_.size());
    std::sort(w.begin(), w.end());
    double max_gap = 0.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        max_gap = std::max(max_gap, w[i + 1] - w[i]);
    // Earliest partial rephasing of the discrete spectrum; the slowest-mode
    // period is only a fallback when every frequency coincides.
    if (max_gap > 1e-12) return 2.0 * std::numbers::pi / max_gap;
    return 2.0 * std::numbers::pi / w.front();
}

}  // namespace focklab
