#include "focklab/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace focklab {

namespace {

constexpr int kTable = 4097;  // cumulative quadrature resolution on [1, 2]

double raw_bump(double sigma) {
    double x = 2.0 * sigma - 3.0;  // [1, 2] -> [-1, 1]
    if (std::abs(x) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - x * x));
}

}  // namespace

SFunction::SFunction(double delta) : delta_(delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("SFunction: delta must lie in (0, 1)");
    // Cumulative trapezoid of the bump and its first moment; the bump is flat
    // to all orders at both endpoints, so the rule converges spectrally.
    m0_.assign(kTable, 0.0);
    m1_.assign(kTable, 0.0);
    double h = 1.0 / (kTable - 1);
    double prev0 = raw_bump(1.0), prev1 = 1.0 * prev0;
    for (int i = 1; i < kTable; ++i) {
        double sigma = 1.0 + i * h;
        double cur0 = raw_bump(sigma);
        double cur1 = sigma * cur0;
        m0_[i] = m0_[i - 1] + 0.5 * h * (prev0 + cur0);
        m1_[i] = m1_[i - 1] + 0.5 * h * (prev1 + cur1);
        prev0 = cur0;
        prev1 = cur1;
    }
    norm_ = m0_.back();
    for (int i = 0; i < kTable; ++i) {
        m0_[i] /= norm_;
        m1_[i] /= norm_;
    }
    b_ = -m1_.back();
}

double SFunction::profile(double sigma) const { return raw_bump(sigma) / norm_; }

double SFunction::M0(double u) const {
    if (u <= 1.0) return 0.0;
    if (u >= 2.0) return m0_.back();
    double pos = (u - 1.0) * (kTable - 1);
    int i = static_cast<int>(pos);
    double frac = pos - i;
    return m0_[i] * (1.0 - frac) + m0_[i + 1] * frac;
}

double SFunction::M1(double u) const {
    if (u <= 1.0) return 0.0;
    if (u >= 2.0) return m1_.back();
    double pos = (u - 1.0) * (kTable - 1);
    int i = static_cast<int>(pos);
    double frac = pos - i;
    return m1_[i] * (1.0 - frac) + m1_[i + 1] * frac;
}

double SFunction::S0(double y) const {
    double u = 0.5 * y * y;
    if (u <= 1.0) return 0.0;
    if (u >= 2.0) return u + b_;
    return u * M0(u) - M1(u);
}

double SFunction::dS0(double y) const { return y * M0(0.5 * y * y); }

double SFunction::d2S0(double y) const {
    double u = 0.5 * y * y;
    return M0(u) + y * y * profile(u) * ((u > 1.0 && u < 2.0) ? 1.0 : 0.0);
}

double SFunction::S(double y, double t) const {
    return std::pow(t, 2.0 * delta_ - 1.0) * S0(y * std::pow(t, -delta_));
}

double SFunction::gradS(double y, double t) const {
    return std::pow(t, delta_ - 1.0) * dS0(y * std::pow(t, -delta_));
}

double SFunction::dtS(double y, double t) const {
    double z = y * std::pow(t, -delta_);
    return std::pow(t, 2.0 * delta_ - 2.0) *
           ((2.0 * delta_ - 1.0) * S0(z) - delta_ * z * dS0(z));
}

SFunctionReport s_function_checks(const SFunction& s, const std::vector<double>& t_samples) {
    if (t_samples.size() < 3)
        throw std::invalid_argument("s_function_checks: need at least three time samples");
    SFunctionReport rep{};
    rep.min_curvature = std::numeric_limits<double>::infinity();
    rep.inner_error = 0.0;
    rep.outer_error = 0.0;

    const int n_y = 4001;
    std::vector<double> grad_err, dt_err;
    for (double t : t_samples) {
        double td = std::pow(t, s.delta());
        double y_max = 2.5 * td;
        double e1 = 0.0, e2 = 0.0;
        for (int i = 0; i < n_y; ++i) {
            double y = y_max * i / (n_y - 1);
            e1 = std::max(e1, std::abs(s.gradS(y, t) - y / t));
            e2 = std::max(e2, std::abs(s.dtS(y, t) + 0.5 * y * y / (t * t)));
            double z = y / td;
            if (0.5 * z * z <= 1.0) rep.inner_error = std::max(rep.inner_error, std::abs(s.S(y, t)));
            if (0.5 * z * z >= 2.0)
                rep.outer_error = std::max(
                    rep.outer_error, std::abs(s.S(y, t) - 0.5 * y * y / t -
                                              s.b() * std::pow(t, 2.0 * s.delta() - 1.0)));
        }
        grad_err.push_back(e1);
        dt_err.push_back(e2);
    }
    for (int i = 0; i < 1201; ++i) {
        double z = 3.0 * i / 1200.0;
        rep.min_curvature = std::min(rep.min_curvature, s.d2S0(z));
    }
    rep.grad_fit = fit_loglog(t_samples, grad_err);
    rep.dt_fit = fit_loglog(t_samples, dt_err);
    return rep;
}

}  // namespace focklab
