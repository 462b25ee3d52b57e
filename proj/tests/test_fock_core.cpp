#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "focklab/basis.hpp"
#include "focklab/grid.hpp"
#include "focklab/ops.hpp"

using namespace focklab;

namespace {

// Brute-force oracle: count occupation tuples with total <= n_max.
int count_states(int modes, int n_max) {
    if (modes == 1) return n_max + 1;
    int total = 0;
    for (int n = 0; n <= n_max; ++n) total += count_states(modes - 1, n_max - n);
    return total;
}

}  // namespace

TEST_CASE("basis dimension matches enumeration oracle") {
    CHECK(FockBasis::build(2, 1).dim() == 3);
    CHECK(FockBasis::build(3, 2).dim() == 10);
    for (int m : {1, 2, 3, 4, 5})
        for (int n : {0, 1, 2, 3}) {
            auto b = FockBasis::build(m, n);
            CHECK(b.dim() == count_states(m, n));
        }
}

TEST_CASE("basis ordering is graded then lexicographic, vacuum first") {
    auto b = FockBasis::build(3, 2);
    CHECK(b.state(0) == std::vector<int>{0, 0, 0});
    for (int i = 0; i + 1 < b.dim(); ++i) {
        int ta = b.total(i), tb = b.total(i + 1);
        CHECK(ta <= tb);
        if (ta == tb) CHECK(b.state(i) < b.state(i + 1));
    }
    // Round trip through find.
    for (int i = 0; i < b.dim(); ++i) CHECK(b.find(b.state(i)) == i);
    CHECK(b.find({1, 1, 1}) == -1);
}

TEST_CASE("sector blocks are contiguous") {
    auto b = FockBasis::build(4, 3);
    for (int n = 0; n <= 3; ++n)
        for (int i = b.sector_begin(n); i < b.sector_end(n); ++i) CHECK(b.total(i) == n);
    CHECK(b.sector_end(3) == b.dim());
}

TEST_CASE("dimension cap refused with computed dimension") {
    CHECK_THROWS_AS(FockBasis::build(20, 10, 1000), TruncationError);
    try {
        FockBasis::build(20, 10, 1000);
    } catch (const TruncationError& e) {
        CHECK(e.requested_dim == 30045015u);  // C(30, 10)
    }
}

TEST_CASE("relativistic dispersion and gap") {
    auto g = ModeGrid::build(-2.0, 2.0, 9, Dispersion::relativistic, 1.0);
    CHECK(g.dk() == doctest::Approx(0.5));
    CHECK(g.omega_at(0.0) == doctest::Approx(1.0));
    CHECK(g.omega_at(1.0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(g.mass_gap() >= 1.0);
    // grad consistent with the central-difference stencil on interior points.
    for (int j = 1; j + 1 < g.n_modes(); ++j) {
        double stencil = (g.omega()(j + 1) - g.omega()(j - 1)) / (2.0 * g.dk());
        CHECK(std::abs(stencil - g.grad_omega()(j)) < 0.5 * g.dk() * g.dk());
    }
}

TEST_CASE("modified massless dispersion keeps half the gap") {
    double m = 0.5;
    auto g = ModeGrid::build(-2.0, 2.0, 33, Dispersion::modified_massless, m);
    CHECK(g.omega_at(1.0) == doctest::Approx(1.0));
    CHECK(g.omega_at(0.0) == doctest::Approx(0.25));
    CHECK(g.omega_at(0.0) >= m / 2.0 - 1e-14);
    CHECK(g.mass_gap() >= m / 2.0 - 1e-14);
    // C^1 match at |k| = m.
    double eps = 1e-7;
    double left = (g.omega_at(m) - g.omega_at(m - eps)) / eps;
    double right = (g.omega_at(m + eps) - g.omega_at(m)) / eps;
    CHECK(std::abs(left - right) < 1e-5);
    CHECK(g.grad_omega_at(0.0) == doctest::Approx(0.0));
}

TEST_CASE("position stencil is Hermitian and consistent") {
    auto g = ModeGrid::build(-1.0, 1.0, 11, Dispersion::relativistic, 1.0);
    CHECK(is_hermitian(g.y_op(), 1e-14));
    // i d/dk applied to exp(-i k y0) picks out y0 on interior points.
    double y0 = 0.7;
    Vec h(g.n_modes());
    for (int j = 0; j < g.n_modes(); ++j) h(j) = std::exp(-iu * (y0 * g.k()(j)));
    Vec yh = g.y_op() * h;
    for (int j = 2; j + 2 < g.n_modes(); ++j)
        CHECK(std::abs(yh(j) - y0 * h(j)) < 0.02);  // O(dk^2 y0^3)
}

TEST_CASE("y_fn matches polynomial assembly") {
    auto g = ModeGrid::build(-1.0, 1.0, 9, Dispersion::relativistic, 1.0);
    Mat y2 = g.y_fn([](double y) { return y * y; });
    CHECK(op_norm(Mat(y2 - g.y_op() * g.y_op())) < 1e-10);
}

TEST_CASE("recurrence estimate for a uniform frequency ladder") {
    // omega roughly uniform for large k; revival near 2 pi / gap.
    auto g = ModeGrid::build(10.0, 11.0, 6, Dispersion::relativistic, 0.1);
    double gap = g.omega()(1) - g.omega()(0);
    CHECK(g.recurrence_estimate() <= 2.0 * std::numbers::pi / gap + 1e-9);
    CHECK(g.recurrence_estimate() > 0.0);
}
