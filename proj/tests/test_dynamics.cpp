#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "focklab/dynamics.hpp"
#include "focklab/spectral.hpp"

using namespace focklab;

namespace {

// Free scalar field on a one-sided band: trivial particle, zero coupling.
Model free_field(const ModeGrid& grid, int n_max) {
    auto part = ParticleSystem::make(Mat::Zero(1, 1));
    FormFactor form;
    form.site_amplitudes = {Vec::Zero(grid.n_modes())};
    return Model::build(part, grid, n_max, form, 0.0);
}

// One-boson Gaussian wave packet centered at k0.
Vec one_boson_packet(const Model& model, double k0, double width) {
    const auto& grid = model.grid();
    Vec psi = Vec::Zero(model.dim());
    for (int j = 0; j < grid.n_modes(); ++j) {
        double k = grid.k()(j);
        psi(model.basis().sector_begin(1) + j) =
            std::exp(-(k - k0) * (k - k0) / (2.0 * width * width));
    }
    psi.normalize();
    return psi;
}

// One-sided massless band with a level-mixing two-site atom; the sign-flipped
// amplitudes make the interaction off-diagonal in the energy basis, so decay
// and relaxation actually happen.
Model one_sided_decay_model(double g, int n_max = 2) {
    auto grid = ModeGrid::build(0.3, 2.7, 12, Dispersion::massless, 0.3);
    auto part = ParticleSystem::make(tunneling_two_level(0.8));
    Vec env = gaussian_amplitudes(grid, 0.8, 0.6, 1.0);
    FormFactor form;
    form.site_amplitudes = {env, Vec(-env)};
    return Model::build(part, grid, n_max, form, g);
}

}  // namespace

TEST_CASE("escape profile: scaling exponents, convexity, exact regions") {
    std::vector<double> ts = {4, 8, 16, 32, 64};
    for (double delta : {0.3, 0.5, 0.7}) {
        SFunction s(delta);
        auto rep = s_function_checks(s, ts);
        CHECK(rep.grad_fit.slope == doctest::Approx(-1.0 + delta).epsilon(0.15 / 0.7));
        CHECK(std::abs(rep.grad_fit.slope - (-1.0 + delta)) < 0.15);
        CHECK(std::abs(rep.dt_fit.slope - (-2.0 + 2.0 * delta)) < 0.15);
        CHECK(rep.min_curvature >= 0.0);
        CHECK(rep.inner_error <= 1e-12);
        CHECK(rep.outer_error <= 1e-9);
    }
    CHECK_THROWS_AS(SFunction(0.0), std::invalid_argument);
    CHECK_THROWS_AS(SFunction(1.0), std::invalid_argument);
}

TEST_CASE("time grids refuse windows past the revival estimate") {
    auto grid = ModeGrid::build(0.3, 2.7, 12, Dispersion::massless, 0.3);
    double rec = grid.recurrence_estimate();
    CHECK(rec == doctest::Approx(2.0 * std::acos(-1.0) / (2.4 / 11.0)).epsilon(1e-9));
    auto tg = TimeGrid::build(1.0, 20.0, 10, rec);
    REQUIRE(tg.t.size() == 10);
    CHECK(tg.t.front() == doctest::Approx(1.0));
    CHECK(tg.t.back() == doctest::Approx(20.0));
    for (std::size_t i = 0; i + 1 < tg.t.size(); ++i) CHECK(tg.t[i] < tg.t[i + 1]);
    CHECK_THROWS_AS(TimeGrid::build(1.0, rec + 1.0, 10, rec), std::invalid_argument);
}

TEST_CASE("one-body transport residual of the escape profile decays like 1/t") {
    SFunction s(0.5);
    auto line = SpectralLine::build(64.0, 256);
    auto fit = ds_residual_slope(
        s, line, [](double p) { return std::sqrt(p * p + 1.0); },
        [](double p) { return p / std::sqrt(p * p + 1.0); }, {2, 4, 8, 14, 22});
    CHECK(std::abs(fit.slope - (-1.0)) < 0.2);
}

TEST_CASE("commutator expansion: second-order remainder in both orderings") {
    auto line = SpectralLine::build(200.0, 400);
    auto sym = periodized_symbol(line, [](double p) { return p / std::sqrt(p * p + 1.0); });
    auto f = [](double x) { return std::exp(-x * x); };
    auto df = [](double x) { return -2.0 * x * std::exp(-x * x); };
    auto rep = commutator_expansion_check(line, sym.g, sym.dg, f, df, {0.2, 0.1, 0.05});
    CHECK(std::abs(rep.left.slope - 2.0) < 0.2);
    CHECK(std::abs(rep.right.slope - 2.0) < 0.2);

    // Constant localization commutes exactly.
    Mat gm = line.mult_k(sym.g);
    Mat fm = line.mult_x([](double) { return 0.7; });
    CHECK(op_norm(Mat(gm * fm - fm * gm)) <= 1e-13 * op_norm(gm));
}

TEST_CASE("number-function commutator closes at order 1/t^2") {
    auto grid = ModeGrid::build(0.3, 1.8, 6, Dispersion::relativistic, 0.4);
    auto basis = FockBasis::build(6, 2);
    auto fit = number_function_commutator_slope(
        grid, basis, [](double x) { return 1.0 / (1.0 + x); },
        [](double x) { return -1.0 / ((1.0 + x) * (1.0 + x)); }, {15, 21, 30, 42, 60});
    CHECK(std::abs(fit.slope - (-2.0)) < 0.3);
}

TEST_CASE("double Heisenberg derivative: positive square plus bounded defect") {
    auto grid = ModeGrid::build(0.3, 2.1, 32, Dispersion::relativistic, 0.4);
    for (double t : {4.0, 8.0}) {
        auto rep = heisenberg_curvature(grid, t);
        CHECK(rep.scale > 0.0);
        CHECK(rep.psd_min_eig >= -1e-12 * rep.scale);
        CHECK(rep.min_eig >= -(1.0 + 1e-9) * rep.defect_norm);
    }
}

TEST_CASE("free asymptotic field iterates are exactly constant") {
    auto grid = ModeGrid::build(0.3, 2.1, 10, Dispersion::relativistic, 0.4);
    auto model = free_field(grid, 2);
    Vec psi = one_boson_packet(model, 1.2, 0.3);
    Vec h = gaussian_amplitudes(grid, 0.9, 0.3, 1.0);
    h.normalize();
    auto tg = TimeGrid::build(1.0, 30.0, 8, grid.recurrence_estimate());
    for (bool creation : {false, true}) {
        auto fr = asymptotic_field(model, h, psi, tg, creation);
        for (std::size_t i = 1; i < fr.trace.cauchy.size(); ++i)
            CHECK(fr.trace.cauchy[i] <= 1e-10);
    }
}

TEST_CASE("coupled field on the ground state dies out") {
    auto model = one_sided_decay_model(0.2);
    Vec gs = model.eig().vecs.col(0);
    Vec h = gaussian_amplitudes(model.grid(), 1.2, 0.4, 1.0);
    h.normalize();
    auto tg = TimeGrid::build(1.0, 20.0, 24, model.grid().recurrence_estimate());
    auto fr = asymptotic_field(model, h, gs, tg);
    double peak = 0.0;
    for (auto& v : fr.trace.value) peak = std::max(peak, v.real());
    CHECK(peak > 0.01);
    CHECK(fr.trace.value.back().real() <= 0.1 * peak);
}

TEST_CASE("asymptotic observable on a free packet hits the escape speed") {
    auto grid = ModeGrid::build(0.3, 2.1, 192, Dispersion::relativistic, 0.4);
    auto model = free_field(grid, 1);
    Vec psi = one_boson_packet(model, 1.2, 0.25);
    SFunction s(0.5);
    auto tg = TimeGrid::build(10.0, 20.0, 9, grid.recurrence_estimate());
    auto res = asymptotic_observable(model, {0.4, 2.4, 0.1}, s, 2.0, tg, psi);
    double oracle = 0.5 * grid.grad_omega_at(1.2) * grid.grad_omega_at(1.2);
    CHECK(std::abs(res.limit_comparator - oracle) <= 0.05 * oracle);
    CHECK(res.limit_with_cutoff > 0.0);
    CHECK(std::abs(res.limit_with_cutoff - res.limit_comparator) <=
          0.10 * res.limit_comparator);
}

TEST_CASE("asymptotic observable vanishes on an eigenvector") {
    auto model = one_sided_decay_model(0.2);
    Vec gs = model.eig().vecs.col(0);
    SFunction s(0.5);
    auto tg = TimeGrid::build(8.0, 20.0, 5, model.grid().recurrence_estimate());
    double e0 = model.ground_energy();
    auto res = asymptotic_observable(model, {e0 - 0.3, e0 + 0.3, 0.05}, s, 1.5, tg, gs);
    CHECK(std::abs(res.limit_with_cutoff) <= 1e-6);
    CHECK(std::abs(res.limit_comparator) <= 1e-3);
}

TEST_CASE("splitting map: quadratic vacuum leakage and vanishing residual") {
    auto grid = ModeGrid::build(0.15, 1.6, 80, Dispersion::relativistic, 1.0);
    auto model = free_field(grid, 1);
    auto ext = extend(model);
    Vec psi = one_boson_packet(model, 0.8, 0.45);
    SFunction s(0.2);
    auto tg = TimeGrid::build(25.0, 55.0, 7, grid.recurrence_estimate());
    std::vector<double> us = {0.1, 0.2, 0.4}, leaks;
    for (double u : us) {
        auto res = deift_simon(ext, {0.9, 2.1, 0.1}, s, 2.0, u, tg, psi);
        leaks.push_back(res.vacuum_leakage.value.back().real());
        CHECK(res.last.norm() > 0.05);  // part of the packet is split off
        // Residual against the one-space transport settles after burn-in.
        const auto& cr = res.composition_residual.value;
        REQUIRE(cr.size() >= 4);
        for (std::size_t i = 2; i < cr.size(); ++i)
            CHECK(cr[i].real() <= cr[i - 1].real() + 1e-12);
    }
    auto fit = fit_loglog(us, leaks);
    CHECK(std::abs(fit.slope - 2.0) < 0.3);
}

TEST_CASE("wave operator: free case exact, identity on zero factors, cap guard") {
    auto grid = ModeGrid::build(0.3, 2.1, 10, Dispersion::relativistic, 0.4);
    auto model = free_field(grid, 3);
    Vec vac = Vec::Zero(model.dim());
    vac(0) = 1.0;
    Vec h1 = gaussian_amplitudes(grid, 0.9, 0.3, 1.0);
    Vec h2 = gaussian_amplitudes(grid, 1.5, 0.3, 1.0);
    h1.normalize();
    h2.normalize();
    auto tg = TimeGrid::build(1.0, 12.0, 6, grid.recurrence_estimate());

    auto wr = wave_operator_apply(model, vac, {h1, h2}, tg);
    CHECK(wr.isometry_defect <= 1e-12);
    for (std::size_t i = 1; i < wr.trace.cauchy.size(); ++i)
        CHECK(wr.trace.cauchy[i] <= 1e-12);

    auto wr0 = wave_operator_apply(model, vac, {}, tg);
    CHECK((wr0.state - vac).norm() <= 1e-12);

    CHECK_THROWS_AS(wave_operator_apply(model, vac, {h1, h2, h1, h2}, tg), TruncationError);
}

TEST_CASE("wave operator converges on the coupled model") {
    auto model = one_sided_decay_model(0.2, 3);
    const auto& basis = model.basis();
    Vec gs = model.eig().vecs.col(0);
    // Trim the top sectors so one creation factor stays under the cap.
    Vec trimmed = gs;
    for (int x = 0; x < model.particle().dim(); ++x)
        trimmed
            .segment(x * basis.dim() + basis.sector_begin(2),
                     basis.dim() - basis.sector_begin(2))
            .setZero();
    trimmed.normalize();
    Vec h = gaussian_amplitudes(model.grid(), 1.4, 0.35, 1.0);
    h.normalize();
    auto tg = TimeGrid::build(1.0, 20.0, 10, model.grid().recurrence_estimate());
    auto wr = wave_operator_apply(model, trimmed, {h}, tg);
    CHECK(wr.trace.cauchy.back() <= 0.1 * *std::max_element(
        wr.trace.cauchy.begin() + 1, wr.trace.cauchy.end()));
    CHECK(wr.isometry_defect <= 1e-3);
}

TEST_CASE("relaxation toward the ground expectation at the golden-rule rate") {
    auto model = one_sided_decay_model(0.35);
    const auto& part = model.particle();
    Mat width = fermi_golden_rule(model, 1, {0.30, 0.45, 0.60});
    double gamma = fgr_decay_rate(width, model.coupling());
    REQUIRE(gamma > 0.1);

    Vec psi0 = Vec::Zero(model.dim());
    for (int x = 0; x < part.dim(); ++x)
        psi0(x * model.basis().dim()) = part.states(x, 1);  // excited atom, no bosons
    Mat b = part.states.col(1) * part.states.col(1).adjoint();
    Vec wh = 0.25 * model.form().site_amplitudes[0];
    auto tg = TimeGrid::build(1.0, 20.0, 60, model.grid().recurrence_estimate());
    auto res = relaxation_experiment(model, psi0, b, wh, tg);
    CHECK(res.initial_deviation > 0.5);
    CHECK(res.final_deviation <= 0.15 * res.initial_deviation);
    CHECK(res.fitted_rate >= 0.5 * gamma);
    CHECK(res.fitted_rate <= 2.0 * gamma);
}

TEST_CASE("annihilation products die on scattering-free states") {
    auto model = one_sided_decay_model(0.2);
    Vec gs = model.eig().vecs.col(0);
    Vec h = gaussian_amplitudes(model.grid(), 1.2, 0.4, 1.0);
    h.normalize();
    auto tg = TimeGrid::build(1.0, 20.0, 24, model.grid().recurrence_estimate());

    auto one = product_annihilation_decay(model, {h}, gs, tg);
    CHECK(one.value.front().real() >= 10.0 * one.value.back().real());
    auto two = product_annihilation_decay(model, {h, h}, gs, tg);
    CHECK(two.value.front().real() >= 10.0 * two.value.back().real());

    // Free vacuum is annihilated identically at every time.
    auto grid = ModeGrid::build(0.3, 2.1, 10, Dispersion::relativistic, 0.4);
    auto freem = free_field(grid, 2);
    Vec vac = Vec::Zero(freem.dim());
    vac(0) = 1.0;
    Vec hf = gaussian_amplitudes(grid, 1.0, 0.3, 1.0);
    auto zero = product_annihilation_decay(freem, {hf}, vac, tg);
    for (auto& v : zero.value) CHECK(v.real() <= 1e-14);
}

TEST_CASE("propagation estimate: velocity shell drains and integrates finitely") {
    auto grid = ModeGrid::build(0.3, 2.1, 48, Dispersion::relativistic, 0.4);
    auto model = free_field(grid, 1);
    Vec psi = one_boson_packet(model, 1.2, 0.25);
    SFunction s(0.5);
    auto tg = TimeGrid::build(2.0, 24.0, 10, grid.recurrence_estimate());
    auto res = propagation_estimate_diagnostic(model, {0.4, 2.4, 0.1}, s, 1.2, tg, psi);
    // All group speeds stay below lambda, so the shell weight empties out.
    CHECK(res.shell.value.back().real() <= 1e-4);
    CHECK(res.partial_integral.back() <= 1.0);
    CHECK(res.partial_integral.back() - res.partial_integral[res.partial_integral.size() / 2] <=
          0.15);
    CHECK(res.quad_form.value.back().real() <= 0.1 * res.quad_form.value.front().real());

    auto coupled = one_sided_decay_model(0.2);
    Vec gs = coupled.eig().vecs.col(0);
    double e0 = coupled.ground_energy();
    auto tg2 = TimeGrid::build(2.0, 20.0, 8, coupled.grid().recurrence_estimate());
    auto res2 =
        propagation_estimate_diagnostic(coupled, {e0 - 0.5, e0 + 0.5, 0.1}, s, 1.2, tg2, gs);
    for (auto& v : res2.shell.value) CHECK(std::abs(v.real()) <= 1e-3);
}

TEST_CASE("polynomial propagator matches the eigensolver backend") {
    auto model = one_sided_decay_model(0.2);
    Vec psi = Vec::Zero(model.dim());
    psi(0) = 0.6;
    psi(model.basis().sector_begin(1) + 3) = 0.8;
    psi.normalize();
    const Mat& h = model.hamiltonian();
    double e_initial = cplx(psi.dot(h * psi)).real();
    for (double t : {1.0, 5.0, 15.0}) {
        Vec a = model.evolve(t, psi);
        Vec b = propagate_chebyshev(h, t, psi);
        CHECK((a - b).norm() <= 1e-10);
        CHECK(std::abs(a.norm() - 1.0) <= 1e-12);
        CHECK(std::abs(cplx(a.dot(h * a)).real() - e_initial) <= 1e-12);
    }
}
