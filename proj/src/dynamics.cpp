#include "focklab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace focklab {

TimeGrid TimeGrid::build(double t_min, double t_max, int samples, double recurrence_cap) {
    if (!(t_min >= 1.0) || !(t_max > t_min) || samples < 2)
        throw std::invalid_argument("TimeGrid: need 1 <= t_min < t_max and at least two samples");
    if (recurrence_cap > 0.0 && t_max >= recurrence_cap) {
        std::ostringstream msg;
        msg << "TimeGrid: t_max " << t_max << " reaches the mode revival estimate "
            << recurrence_cap;
        throw std::invalid_argument(msg.str());
    }
    TimeGrid tg;
    tg.recurrence = recurrence_cap;
    double ratio = std::pow(t_max / t_min, 1.0 / (samples - 1));
    for (int i = 0; i < samples; ++i) tg.t.push_back(t_min * std::pow(ratio, i));
    tg.t.back() = t_max;
    return tg;
}

void finalize_trace(Trace& tr) {
    if (tr.cauchy.size() != tr.value.size()) {
        tr.cauchy.assign(tr.value.size(), 0.0);
        for (std::size_t i = 1; i < tr.value.size(); ++i)
            tr.cauchy[i] = std::abs(tr.value[i] - tr.value[i - 1]);
    }
    std::vector<double> ts(tr.t.begin() + 1, tr.t.end());
    std::vector<double> cs(tr.cauchy.begin() + 1, tr.cauchy.end());
    tr.fitted_slope = fit_loglog(ts, cs).slope;
}

Mat heisenberg_dS(const SFunction& s, const ModeGrid& grid, double t) {
    Mat w = grid.omega_op();
    Mat sm = grid.y_fn([&](double y) { return s.S(y, t); });
    Mat dts = grid.y_fn([&](double y) { return s.dtS(y, t); });
    Mat out = iu * (w * sm - sm * w) + dts;
    return 0.5 * (out + Mat(out.adjoint()));
}

CurvatureReport heisenberg_curvature(const ModeGrid& grid, double t) {
    Mat w = grid.omega_op();
    const Mat& y = grid.y_op();
    Mat y2 = y * y;
    Mat comm = iu * (w * y2 - y2 * w);
    Mat m1 = comm / (2.0 * t) - y2 / (2.0 * t * t);
    Mat m2 = iu * (w * m1 - m1 * w) - comm / (2.0 * t * t) + y2 / (t * t * t);
    m2 = 0.5 * (m2 + Mat(m2.adjoint()));

    // Exact split m2 = (1/t)(B - y/t)^2 + (Cy + yC)/2t with B = i[w, y] and
    // C = i[w, B]; C is the stencil's deviation from [w, grad w] = 0.
    Mat b = iu * (w * y - y * w);
    Mat sq = b - y / t;
    Mat psd = (sq * sq) / t;
    Mat c = iu * (w * b - b * w);
    Mat defect = (c * y + y * c) / (2.0 * t);

    CurvatureReport rep;
    rep.min_eig = min_eig_herm(m2);
    rep.scale = op_norm(m2);
    rep.psd_min_eig = min_eig_herm(0.5 * (psd + Mat(psd.adjoint())));
    rep.defect_norm = op_norm(Mat(0.5 * (defect + Mat(defect.adjoint()))));
    return rep;
}

SpectralLine SpectralLine::build(double length, int n) {
    if (length <= 0.0 || n < 4)
        throw std::invalid_argument("SpectralLine: need positive length and at least 4 points");
    SpectralLine line;
    line.x_.resize(n);
    line.k_.resize(n);
    double h = length / n;
    for (int j = 0; j < n; ++j) line.x_(j) = -0.5 * length + j * h;
    for (int m = 0; m < n; ++m) {
        int shifted = m < (n + 1) / 2 ? m : m - n;
        line.k_(m) = 2.0 * std::numbers::pi * shifted / length;
    }
    line.fourier_.resize(n, n);
    double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int m = 0; m < n; ++m)
        for (int j = 0; j < n; ++j)
            line.fourier_(m, j) = scale * std::exp(-iu * (line.k_(m) * line.x_(j)));
    return line;
}

Mat SpectralLine::mult_x(const std::function<double(double)>& f) const {
    Vec d(n());
    for (int j = 0; j < n(); ++j) d(j) = f(x_(j));
    return d.asDiagonal();
}

Mat SpectralLine::mult_k(const std::function<double(double)>& g) const {
    Vec d(n());
    for (int m = 0; m < n(); ++m) d(m) = g(k_(m));
    return fourier_.adjoint() * Mat(d.asDiagonal()) * fourier_;
}

TaperedSymbol periodized_symbol(const SpectralLine& line,
                                const std::function<double(double)>& dg,
                                double core_fraction) {
    if (!(core_fraction > 0.0 && core_fraction < 1.0))
        throw std::invalid_argument("periodized_symbol: core fraction must lie in (0, 1)");
    double k_max = line.k().cwiseAbs().maxCoeff() * (1.0 + 1.0 / line.n());
    double a = core_fraction * k_max;
    double width = 0.9 * (k_max - a);
    auto taper = [a, width](double k) {
        return 1.0 - smooth_step((std::abs(k) - a) / width);
    };
    int n_tab = 8192;
    auto table = std::make_shared<std::vector<double>>(n_tab + 1, 0.0);
    double h = k_max / n_tab;
    double prev = dg(0.0) * taper(0.0);
    for (int i = 1; i <= n_tab; ++i) {
        double k = i * h;
        double cur = dg(k) * taper(k);
        (*table)[i] = (*table)[i - 1] + 0.5 * h * (prev + cur);
        prev = cur;
    }
    TaperedSymbol out;
    out.g = [table, h, k_max, n_tab](double k) {
        double kk = std::min(std::abs(k), k_max);
        double pos = kk / h;
        int i = std::min(static_cast<int>(pos), n_tab - 1);
        double frac = pos - i;
        return (*table)[i] * (1.0 - frac) + (*table)[i + 1] * frac;
    };
    out.dg = [dg, taper](double k) { return dg(k) * taper(k); };
    return out;
}

SlopeFit ds_residual_slope(const SFunction& s, const SpectralLine& line,
                           const std::function<double(double)>& omega,
                           const std::function<double(double)>& grad_omega,
                           const std::vector<double>& t_samples) {
    if (t_samples.size() < 3)
        throw std::invalid_argument("ds_residual_slope: need at least three time samples");
    Mat g = line.mult_k(omega);
    Mat gp = line.mult_k(grad_omega);
    std::vector<double> res;
    for (double t : t_samples) {
        Mat sx = line.mult_x([&](double y) { return s.S(y, t); });
        Mat dsx = line.mult_x([&](double y) { return s.gradS(y, t); });
        res.push_back(op_norm(Mat(iu * (g * sx - sx * g) - 0.5 * (gp * dsx + dsx * gp))));
    }
    return fit_loglog(t_samples, res);
}

ExpansionReport commutator_expansion_check(const SpectralLine& line,
                                           const std::function<double(double)>& g,
                                           const std::function<double(double)>& dg,
                                           const std::function<double(double)>& f,
                                           const std::function<double(double)>& df,
                                           const std::vector<double>& eps_samples) {
    if (eps_samples.size() < 3)
        throw std::invalid_argument("commutator_expansion_check: need at least three scales");
    Mat gm = line.mult_k(g);
    Mat gpm = line.mult_k(dg);
    std::vector<double> left, right;
    for (double eps : eps_samples) {
        Mat fm = line.mult_x([&](double x) { return f(eps * x); });
        Mat dfm = line.mult_x([&](double x) { return df(eps * x); });
        Mat comm = iu * (gm * fm - fm * gm);
        left.push_back(op_norm(Mat(comm - eps * gpm * dfm)));
        right.push_back(op_norm(Mat(comm - eps * dfm * gpm)));
    }
    return {fit_loglog(eps_samples, left), fit_loglog(eps_samples, right)};
}

SlopeFit number_function_commutator_slope(const ModeGrid& grid, const FockBasis& basis,
                                          const std::function<double(double)>& f,
                                          const std::function<double(double)>& df,
                                          const std::vector<double>& t_samples) {
    if (t_samples.size() < 3)
        throw std::invalid_argument("number_function_commutator_slope: need three time samples");
    const Mat& y = grid.y_op();
    Mat x2 = Mat(dGamma(basis, Mat(y * y)));
    auto ex = eigensolve(x2);
    Mat a = Mat(dGamma(basis, grid.omega_op()));
    Mat dw = grid.grad_omega_op();
    Mat c1 = Mat(dGamma(basis, Mat(dw * y + y * dw)));

    std::vector<double> res;
    for (double t : t_samples) {
        Vec fd(basis.dim()), fpd(basis.dim());
        for (int i = 0; i < basis.dim(); ++i) {
            double s = ex.vals(i) / (t * t);
            fd(i) = f(s);
            fpd(i) = df(s);
        }
        Mat fm = ex.vecs * Mat(fd.asDiagonal()) * ex.vecs.adjoint();
        Mat fpm = ex.vecs * Mat(fpd.asDiagonal()) * ex.vecs.adjoint();
        Mat comm = iu * (a * fm - fm * a);
        Mat lead = 0.5 * (fpm * c1 + c1 * fpm) / (t * t);
        res.push_back(op_norm(Mat(comm - lead)));
    }
    return fit_loglog(t_samples, res);
}

Vec propagate_chebyshev(const Mat& h, double t, const Vec& psi, double tol) {
    if (h.rows() != h.cols() || h.rows() != psi.size())
        throw std::invalid_argument("propagate_chebyshev: dimension mismatch");
    // Gershgorin bounds for the spectral interval.
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < h.rows(); ++i) {
        double center = h(i, i).real();
        double radius = 0.0;
        for (int j = 0; j < h.cols(); ++j)
            if (j != i) radius += std::abs(h(i, j));
        lo = std::min(lo, center - radius);
        hi = std::max(hi, center + radius);
    }
    double mid = 0.5 * (lo + hi);
    double half = std::max(0.5 * (hi - lo), 1e-12);
    Mat hs = (h - mid * Mat::Identity(h.rows(), h.cols())) / half;

    double z = half * std::abs(t);
    Vec v_prev = psi;
    Vec v_cur = hs * psi;
    Vec acc = std::cyl_bessel_j(0, z) * v_prev;
    cplx unit = t >= 0.0 ? -iu : iu;
    cplx phase = unit;
    int k_max = static_cast<int>(z + 40.0 + 10.0 * std::log1p(z));
    for (int k = 1; k <= k_max; ++k) {
        double jk = std::cyl_bessel_j(k, z);
        acc += 2.0 * jk * phase * v_cur;
        if (k > z && std::abs(jk) < tol) break;
        Vec v_next = 2.0 * (hs * v_cur) - v_prev;
        v_prev.swap(v_cur);
        v_cur = v_next;
        phase *= unit;
    }
    return std::exp(-iu * (mid * t)) * acc;
}

namespace {

Vec phased(const ModeGrid& grid, const Vec& h, double t) {
    Vec out(h.size());
    for (int j = 0; j < h.size(); ++j) out(j) = std::exp(-iu * (grid.omega()(j) * t)) * h(j);
    return out;
}

void vector_trace_push(Trace& tr, double t, const Vec& v, Vec& prev) {
    tr.t.push_back(t);
    tr.value.push_back(v.norm());
    tr.cauchy.push_back(prev.size() == v.size() ? (v - prev).norm() : 0.0);
    prev = v;
}

void fit_trace_slope(Trace& tr) {
    std::vector<double> ts(tr.t.begin() + 1, tr.t.end());
    std::vector<double> cs(tr.cauchy.begin() + 1, tr.cauchy.end());
    tr.fitted_slope = fit_loglog(ts, cs).slope;
}

// Smooth cutoff of dGamma(y^2)/t^2 at lambda^2 through a shared
// eigendecomposition; weight 1 below lambda^2, 0 above 2 lambda^2.
Mat velocity_cutoff(const EigenSystem& ex, double t, double lambda) {
    Vec d(ex.vals.size());
    for (int i = 0; i < ex.vals.size(); ++i) {
        double sc = ex.vals(i) / (t * t);
        d(i) = 1.0 - smooth_step(sc / (lambda * lambda) - 1.0);
    }
    return ex.vecs * Mat(d.asDiagonal()) * ex.vecs.adjoint();
}

}  // namespace

FieldResult asymptotic_field(const Model& model, const Vec& h, const Vec& psi,
                             const TimeGrid& tgrid, bool creation) {
    FieldResult res;
    Vec prev;
    for (double t : tgrid.t) {
        Vec ht = phased(model.grid(), h, t);
        SpMat op = creation ? create(model.basis(), ht) : annihilate(model.basis(), ht);
        Vec v = model.evolve(-t, model.lift_fock(Mat(op)) * model.evolve(t, psi));
        vector_trace_push(res.trace, t, v, prev);
    }
    res.last = prev;
    fit_trace_slope(res.trace);
    return res;
}

WaveOpResult wave_operator_apply(const Model& model, const Vec& bound_vec,
                                 const std::vector<Vec>& h_list, const TimeGrid& tgrid) {
    const auto& basis = model.basis();
    int occupancy = 0;
    for (int n = basis.n_max(); n >= 1; --n) {
        double norm2 = 0.0;
        for (int x = 0; x < model.particle().dim(); ++x)
            norm2 += bound_vec
                         .segment(x * basis.dim() + basis.sector_begin(n),
                                  basis.sector_end(n) - basis.sector_begin(n))
                         .squaredNorm();
        if (norm2 > 1e-16) {
            occupancy = n;
            break;
        }
    }
    if (occupancy + static_cast<int>(h_list.size()) > basis.n_max())
        throw TruncationError("wave_operator_apply: creation product leaves the truncation",
                              static_cast<std::uint64_t>(occupancy + h_list.size()));

    WaveOpResult res;
    Vec prev;
    for (double t : tgrid.t) {
        Vec v = model.evolve(t, bound_vec);
        for (auto it = h_list.rbegin(); it != h_list.rend(); ++it)
            v = model.lift_fock(Mat(create(basis, phased(model.grid(), *it, t)))) * v;
        v = model.evolve(-t, v);
        vector_trace_push(res.trace, t, v, prev);
    }
    res.state = prev;
    fit_trace_slope(res.trace);
    // Isometry reference: the free product state a*(h_1)...a*(h_n) vac carries
    // the overlap combinatorics of the h's, not just the norm product.
    Vec free_prod = Vec::Zero(basis.dim());
    free_prod(0) = 1.0;
    for (auto it = h_list.rbegin(); it != h_list.rend(); ++it)
        free_prod = Mat(create(basis, *it)) * free_prod;
    res.isometry_defect = std::abs(res.state.norm() - free_prod.norm() * bound_vec.norm());
    return res;
}

AsymptoticObservableResult asymptotic_observable(const Model& model, ObservableWindow window,
                                                 const SFunction& s, double lambda,
                                                 const TimeGrid& tgrid, const Vec& psi) {
    const auto& basis = model.basis();
    const auto& grid = model.grid();
    Mat chi = model.energy_window(window.lo, window.hi, window.edge);
    const Mat& y = grid.y_op();
    Mat x2 = Mat(dGamma(basis, Mat(y * y)));
    auto ex = eigensolve(x2);
    Mat x2_lift = model.lift_fock(x2);

    AsymptoticObservableResult res;
    for (double t : tgrid.t) {
        Vec psi_t = model.evolve(t, psi);
        Mat f = model.lift_fock(velocity_cutoff(ex, t, lambda));
        Mat d = model.lift_fock(Mat(dGamma(basis, heisenberg_dS(s, grid, t))));
        Vec w = f * (chi * psi_t);
        res.with_cutoff.t.push_back(t);
        res.with_cutoff.value.push_back(cplx(w.dot(d * w)).real());
        res.comparator.t.push_back(t);
        res.comparator.value.push_back(cplx(psi_t.dot(x2_lift * psi_t)).real() / (2.0 * t * t));
    }
    finalize_trace(res.with_cutoff);
    finalize_trace(res.comparator);
    auto tail_mean = [](const Trace& tr) {
        std::size_t n = tr.value.size();
        std::size_t start = n - std::max<std::size_t>(1, n / 4);
        double acc = 0.0;
        for (std::size_t i = start; i < n; ++i) acc += tr.value[i].real();
        return acc / (n - start);
    };
    res.limit_with_cutoff = tail_mean(res.with_cutoff);
    res.limit_comparator = tail_mean(res.comparator);
    return res;
}

DeiftSimonResult deift_simon(const ExtendedModel& ext, ObservableWindow window,
                             const SFunction& s, double lambda, double u,
                             const TimeGrid& tgrid, const Vec& psi) {
    const Model& model = *ext.base;
    const auto& basis = model.basis();
    const auto& grid = model.grid();
    int nf = basis.dim();
    int nt = ext.tensor.dim();
    int np = model.particle().dim();

    Mat chi = model.energy_window(window.lo, window.hi, window.edge);
    const Mat& y = grid.y_op();
    Mat x2 = Mat(dGamma(basis, Mat(y * y)));
    auto ex = eigensolve(x2);
    Mat ifock = Mat(scattering_identification(basis, *ext.doubled, ext.tensor));
    Mat pvac = Mat(ext.tensor.right_sector_projector(0));
    Mat eye = Mat::Identity(grid.n_modes(), grid.n_modes());
    Mat wdiag = grid.omega_op();

    auto j0_profile = [&](double t) {
        return grid.y_fn([&](double yy) { return 1.0 - smooth_step(std::abs(yy) / (u * t) - 1.0); });
    };

    DeiftSimonResult res;
    Vec prev;
    for (double t : tgrid.t) {
        Mat j0 = j0_profile(t);
        Mat jinf = eye - j0;
        double dt = 1e-4 * t;
        Mat dj0_time = (j0_profile(t + dt) - j0_profile(t - dt)) / (2.0 * dt);
        Mat dj0 = iu * (wdiag * j0 - j0 * wdiag) + dj0_time;
        dj0 = 0.5 * (dj0 + Mat(dj0.adjoint()));

        SplitPair j{j0, jinf, PartitionKind::summing};
        SplitPair dj{dj0, Mat(-dj0), PartitionKind::summing};
        Mat gamma = Mat(gamma_split(j, basis, *ext.doubled, ext.tensor));
        Mat dgamma = Mat(dGamma_split(j, dj, basis, *ext.doubled, ext.tensor));

        Mat sm = Mat(dGamma(basis, grid.y_fn([&](double yy) { return s.S(yy, t); })));
        Mat dsm = Mat(dGamma(basis, heisenberg_dS(s, grid, t)));
        Mat q = dgamma * sm + gamma * dsm;

        Mat f = velocity_cutoff(ex, t, lambda);
        Vec psi_t = model.evolve(t, psi);
        Vec w(np * nf);
        {
            Vec filtered = chi * psi_t;
            for (int x = 0; x < np; ++x)
                w.segment(x * nf, nf) = f * filtered.segment(x * nf, nf);
        }

        Vec qe(np * nt);
        for (int x = 0; x < np; ++x) qe.segment(x * nt, nt) = q * w.segment(x * nf, nf);
        Vec out = ext.evolve(-t, qe);
        vector_trace_push(res.iterates, t, out, prev);

        // Norm of the aux-vacuum block of the whole finite-time map; the
        // evolution unitaries drop from the norm.
        Mat leak_op = Mat::Zero(np * nt, np * nf);
        {
            Mat pqf = pvac * q * f;
            for (int x = 0; x < np; ++x)
                leak_op.block(x * nt, x * nf, nt, nf) = pqf;
            leak_op = leak_op * chi;
        }
        res.vacuum_leakage.t.push_back(t);
        res.vacuum_leakage.value.push_back(op_norm(leak_op));

        // Identified transport vs the one-space observable iterate; the
        // unitary prefactors drop from the norm.
        Vec identified(np * nf), direct(np * nf);
        for (int x = 0; x < np; ++x)
            identified.segment(x * nf, nf) = ifock * qe.segment(x * nt, nt);
        {
            Vec dsw(np * nf);
            for (int x = 0; x < np; ++x) dsw.segment(x * nf, nf) = dsm * w.segment(x * nf, nf);
            Vec fds(np * nf);
            for (int x = 0; x < np; ++x) fds.segment(x * nf, nf) = f * dsw.segment(x * nf, nf);
            direct = chi * fds;
        }
        res.composition_residual.t.push_back(t);
        res.composition_residual.value.push_back((identified - direct).norm());
    }
    res.last = prev;
    fit_trace_slope(res.iterates);
    finalize_trace(res.vacuum_leakage);
    finalize_trace(res.composition_residual);
    return res;
}

RelaxationResult relaxation_experiment(const Model& model, const Vec& psi0,
                                       const Mat& b_particle, const Vec& weyl_h,
                                       const TimeGrid& tgrid) {
    Mat phi_h = Mat(field(model.basis(), weyl_h));
    auto ef = eigensolve(phi_h);
    Vec phases(ef.vals.size());
    for (int i = 0; i < ef.vals.size(); ++i) phases(i) = std::exp(iu * ef.vals(i));
    Mat weyl = ef.vecs * Mat(phases.asDiagonal()) * ef.vecs.adjoint();
    Mat obs = model.lift_particle(b_particle) * model.lift_fock(weyl);

    RelaxationResult res;
    Vec gs = model.eig().vecs.col(0);
    res.ground_value = gs.dot(obs * gs);
    for (double t : tgrid.t) {
        Vec psi_t = model.evolve(t, psi0);
        res.deviation.t.push_back(t);
        res.deviation.value.push_back(cplx(psi_t.dot(obs * psi_t)) - res.ground_value);
    }
    finalize_trace(res.deviation);
    res.initial_deviation = std::abs(res.deviation.value.front());
    res.final_deviation = std::abs(res.deviation.value.back());

    // Envelope rate: line through the log-magnitude of the local peaks.
    std::vector<double> pt, pv;
    const auto& vals = res.deviation.value;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        double cur = std::abs(vals[i]);
        bool peak = (i == 0 || cur >= std::abs(vals[i - 1])) &&
                    (i + 1 == vals.size() || cur >= std::abs(vals[i + 1]));
        if (peak && cur > 0.0) {
            pt.push_back(res.deviation.t[i]);
            pv.push_back(std::log(cur));
        }
    }
    res.fitted_rate = pt.size() >= 2 ? -fit_linear(pt, pv).slope : 0.0;
    return res;
}

Trace product_annihilation_decay(const Model& model, const std::vector<Vec>& h_list,
                                 const Vec& phi, const TimeGrid& tgrid) {
    Trace tr;
    for (double t : tgrid.t) {
        Vec v = model.evolve(t, phi);
        for (const auto& h : h_list)
            v = model.lift_fock(Mat(annihilate(model.basis(), phased(model.grid(), h, t)))) * v;
        tr.t.push_back(t);
        tr.value.push_back(v.norm());
    }
    finalize_trace(tr);
    return tr;
}

PropagationResult propagation_estimate_diagnostic(const Model& model, ObservableWindow window,
                                                  const SFunction& s, double lambda,
                                                  const TimeGrid& tgrid, const Vec& psi) {
    const auto& basis = model.basis();
    const auto& grid = model.grid();
    Mat chi = model.energy_window(window.lo, window.hi, window.edge);
    const Mat& y = grid.y_op();
    Mat x2 = Mat(dGamma(basis, Mat(y * y)));
    auto ex = eigensolve(x2);
    Mat dw = grid.grad_omega_op();

    PropagationResult res;
    double integral = 0.0;
    double prev_t = 0.0, prev_val = 0.0;
    for (double t : tgrid.t) {
        Vec psi_t = model.evolve(t, psi);
        Vec w = chi * psi_t;

        Vec shell_d(ex.vals.size());
        for (int i = 0; i < ex.vals.size(); ++i) {
            double sc = ex.vals(i) / (t * t);
            shell_d(i) = smooth_window(sc, lambda * lambda, 2.0 * lambda * lambda,
                                       0.2 * lambda * lambda);
        }
        Mat shell = model.lift_fock(Mat(ex.vecs * Mat(shell_d.asDiagonal()) * ex.vecs.adjoint()));
        double shell_val = cplx(w.dot(shell * w)).real() / t;
        res.shell.t.push_back(t);
        res.shell.value.push_back(shell_val);

        Mat a = dw - y / t;
        Mat curvature = grid.y_fn([&](double yy) {
            return s.d2S0(yy * std::pow(t, -s.delta()));
        });
        Mat b = (a * curvature * a) / t;
        b = 0.5 * (b + Mat(b.adjoint()));
        Mat f = model.lift_fock(velocity_cutoff(ex, t, lambda));
        Vec v = f * w;
        res.quad_form.t.push_back(t);
        res.quad_form.value.push_back(cplx(v.dot(model.lift_fock(Mat(dGamma(basis, b))) * v)).real());

        if (!res.partial_integral.empty())
            integral += 0.5 * (shell_val + prev_val) * (t - prev_t);
        res.partial_integral.push_back(integral);
        prev_t = t;
        prev_val = shell_val;
    }
    finalize_trace(res.shell);
    finalize_trace(res.quad_form);
    return res;
}

}  // namespace focklab
