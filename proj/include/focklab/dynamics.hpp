#pragma once

#include <functional>
#include <vector>

#include "focklab/model.hpp"

namespace focklab {

// Convex escape profile: S0(y) = 0 for y^2/2 <= 1 and S0(y) = y^2/2 + b for
// y^2/2 >= 2, glued by a smooth bump m supported on [1, 2] with integral 1.
// The scaled version S(y, t) = t^{-1+2*delta} S0(y / t^delta) tracks
// y^2 / (2t) up to the exponent delta in (0, 1).
class SFunction {
  public:
    explicit SFunction(double delta);

    double delta() const { return delta_; }
    double b() const { return b_; }

    double profile(double sigma) const;  // the bump m
    double S0(double y) const;
    double dS0(double y) const;
    double d2S0(double y) const;

    double S(double y, double t) const;
    double gradS(double y, double t) const;
    double dtS(double y, double t) const;

  private:
    double M0(double u) const;  // integral of m up to u
    double M1(double u) const;  // integral of sigma * m up to u

    double delta_ = 0.5;
    double b_ = 0.0;
    double norm_ = 1.0;
    std::vector<double> m0_, m1_;
};

struct SFunctionReport {
    SlopeFit grad_fit;       // sup_y |gradS - y/t| vs t, expected -1 + delta
    SlopeFit dt_fit;         // sup_y |dtS + y^2/2t^2| vs t, expected -2 + 2*delta
    double min_curvature;    // min over samples of S0''
    double inner_error;      // max |S| where the profile is exactly zero
    double outer_error;      // max |S - y^2/2t - b t^{2 delta - 1}| far out
};
SFunctionReport s_function_checks(const SFunction& s, const std::vector<double>& t_samples);

// Geometric time grid; refuses windows that reach past the mode-revival
// estimate, since nothing asymptotic survives beyond it.
struct TimeGrid {
    std::vector<double> t;
    double recurrence = 0.0;

    static TimeGrid build(double t_min, double t_max, int samples, double recurrence_cap);
};

// Time trace with Cauchy increments and the fitted log-log decay of the
// increments (over the samples where they are positive).
struct Trace {
    std::vector<double> t;
    std::vector<cplx> value;
    std::vector<double> cauchy;
    double fitted_slope = 0.0;
};
void finalize_trace(Trace& tr);  // fills cauchy from value and fits the slope

// One-body Heisenberg derivative of S on the mode grid:
// dS = i[w, S(y, t)] + dS/dt, Hermitian.
Mat heisenberg_dS(const SFunction& s, const ModeGrid& grid, double t);

// Double Heisenberg derivative of y^2/2t.  With B = i[w, y] it splits exactly
// into (1/t)(B - y/t)^2, positive by construction, plus a defect built from
// i[w, B], which would vanish in the continuum (there B is a function of the
// momentum); negativity is bounded by the reported defect norm.
struct CurvatureReport {
    double min_eig;
    double scale;
    double psd_min_eig;  // smallest eigenvalue of the exact square part
    double defect_norm;  // norm of the i[w, B] remainder term
};
CurvatureReport heisenberg_curvature(const ModeGrid& grid, double t);

// Periodic lattice with position diagonal and momentum through the discrete
// Fourier transform; used for the commutator expansion checks, where the
// difference stencil is not accurate enough.
class SpectralLine {
  public:
    static SpectralLine build(double length, int n);

    int n() const { return static_cast<int>(x_.size()); }
    const RVec& x() const { return x_; }
    const RVec& k() const { return k_; }

    Mat mult_x(const std::function<double(double)>& f) const;
    Mat mult_k(const std::function<double(double)>& g) const;

  private:
    RVec x_, k_;
    Mat fourier_;
};

// Symbol with its derivative smoothly flattened before the dual-lattice
// boundary, so the implicit periodization is smooth there; the original
// symbol is untouched on the inner core_fraction of the band, and an
// additive constant is dropped (it cancels in every commutator).
struct TaperedSymbol {
    std::function<double(double)> g, dg;
};
TaperedSymbol periodized_symbol(const SpectralLine& line,
                                const std::function<double(double)>& dg,
                                double core_fraction = 0.6);

// Slope of || i[w(p), S(x, t)] - (grad w grad S + grad S grad w)/2 || vs t;
// expected -1.
SlopeFit ds_residual_slope(const SFunction& s, const SpectralLine& line,
                           const std::function<double(double)>& omega,
                           const std::function<double(double)>& grad_omega,
                           const std::vector<double>& t_samples);

// || i[g(p), f(eps x)] - eps grad g grad f(eps x) || vs eps for both factor
// orderings of the leading term; expected slope 2.
struct ExpansionReport {
    SlopeFit left;   // leading term eps * g'(p) f'(eps x)
    SlopeFit right;  // leading term eps * f'(eps x) g'(p)
};
ExpansionReport commutator_expansion_check(const SpectralLine& line,
                                           const std::function<double(double)>& g,
                                           const std::function<double(double)>& dg,
                                           const std::function<double(double)>& f,
                                           const std::function<double(double)>& df,
                                           const std::vector<double>& eps_samples);

// || [i dGamma(w), f(dGamma(v^2))] - {f'(dGamma(v^2)), dGamma({grad w, v})/2}/t ||
// with v = y/t, fitted vs t; the difference-stencil defect sits inside the
// leading 1/t^2 term, so the expected slope is -2.
SlopeFit number_function_commutator_slope(const ModeGrid& grid, const FockBasis& basis,
                                          const std::function<double(double)>& f,
                                          const std::function<double(double)>& df,
                                          const std::vector<double>& t_samples);

// Optional polynomial propagator: Chebyshev expansion of e^{-iHt} psi, for
// cross-checking the eigendecomposition backend.
Vec propagate_chebyshev(const Mat& h, double t, const Vec& psi, double tol = 1e-13);

// e^{iHt} a#(e^{-iwt} h) e^{-iHt} psi over the time grid; the trace carries
// the vector norms, the Cauchy column the successive vector differences.
struct FieldResult {
    Trace trace;
    Vec last;
};
FieldResult asymptotic_field(const Model& model, const Vec& h, const Vec& psi,
                             const TimeGrid& tgrid, bool creation = false);

// e^{iHT} a*(h_{1,T}) ... a*(h_{n,T}) e^{-iHT} applied to a bound state, with
// the convergence trace over the grid and the norm-product isometry defect.
struct WaveOpResult {
    Vec state;
    Trace trace;
    double isometry_defect;
};
WaveOpResult wave_operator_apply(const Model& model, const Vec& bound_vec,
                                 const std::vector<Vec>& h_list, const TimeGrid& tgrid);

struct ObservableWindow {
    double lo, hi, edge;
};

// Trace of <psi_t, chi f dGamma(dS) f chi psi_t> with the smooth velocity
// cutoff f = f(dGamma(y^2)/t^2 <= lambda^2), next to the cutoff-free
// comparator <dGamma(y^2/2t^2)>; both should settle on the mean squared
// escape speed over the window.
struct AsymptoticObservableResult {
    Trace with_cutoff;
    Trace comparator;
    double limit_with_cutoff;
    double limit_comparator;
};
AsymptoticObservableResult asymptotic_observable(const Model& model, ObservableWindow window,
                                                 const SFunction& s, double lambda,
                                                 const TimeGrid& tgrid, const Vec& psi);

// Finite-time splitting map into the doubled space: W(T) applies
// e^{i H~ T} [dGamma^(j_T, dj_T) dGamma(S) + Gamma^(j_T) dGamma(dS)] f chi e^{-iHT}
// with the summing partition j_T = j(y / uT).  Reports the iterate Cauchy
// trace, the far-vacuum leakage (expected to scale like u^2), and the
// residual against the identified one-space transport.
struct DeiftSimonResult {
    Trace iterates;
    Trace vacuum_leakage;
    Trace composition_residual;
    Vec last;
};
DeiftSimonResult deift_simon(const ExtendedModel& ext, ObservableWindow window,
                             const SFunction& s, double lambda, double u,
                             const TimeGrid& tgrid, const Vec& psi);

// <psi_t, (B (x) e^{i phi(h)}) psi_t> against the ground-state value; the
// envelope rate comes from a line fit through the peaks of |deviation|.
struct RelaxationResult {
    Trace deviation;
    cplx ground_value;
    double initial_deviation;
    double final_deviation;
    double fitted_rate;
};
RelaxationResult relaxation_experiment(const Model& model, const Vec& psi0,
                                       const Mat& b_particle, const Vec& weyl_h,
                                       const TimeGrid& tgrid);

// || a(h_{1,t}) ... a(h_{n,t}) e^{-iHt} phi || over the grid.
Trace product_annihilation_decay(const Model& model, const std::vector<Vec>& h_list,
                                 const Vec& phi, const TimeGrid& tgrid);

// Propagation-estimate integrands: the velocity-shell weight
// (1/t) <chi psi_t, chi(lambda^2 <= dGamma(v^2) <= 2 lambda^2) chi psi_t> and
// the convexity form <f chi psi_t, dGamma((grad w - v) S''(grad w - v)/t) f chi psi_t>,
// with the running integral of the shell weight.
struct PropagationResult {
    Trace shell;
    Trace quad_form;
    std::vector<double> partial_integral;
};
PropagationResult propagation_estimate_diagnostic(const Model& model, ObservableWindow window,
                                                  const SFunction& s, double lambda,
                                                  const TimeGrid& tgrid, const Vec& psi);

}  // namespace focklab
