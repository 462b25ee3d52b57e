#include "focklab/ops.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace focklab {

Vec vacuum(const FockBasis& b) {
    Vec v = Vec::Zero(b.dim());
    v(0) = 1.0;
    return v;
}

SpMat create_mode(const FockBasis& b, int mode) {
    if (mode < 0 || mode >= b.n_modes())
        throw std::invalid_argument("create_mode: mode index out of range");
    std::vector<Eigen::Triplet<cplx>> trip;
    std::vector<int> occ;
    for (int i = 0; i < b.dim(); ++i) {
        if (b.total(i) == b.n_max()) continue;
        occ = b.state(i);
        occ[mode] += 1;
        int j = b.find(occ);
        trip.emplace_back(j, i, std::sqrt(static_cast<double>(occ[mode])));
    }
    SpMat out(b.dim(), b.dim());
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

SpMat create(const FockBasis& b, const Vec& h) {
    if (h.size() != b.n_modes())
        throw std::invalid_argument("create: amplitude length != n_modes");
    std::vector<Eigen::Triplet<cplx>> trip;
    std::vector<int> occ;
    for (int i = 0; i < b.dim(); ++i) {
        if (b.total(i) == b.n_max()) continue;
        for (int m = 0; m < b.n_modes(); ++m) {
            if (h(m) == cplx(0.0)) continue;
            occ = b.state(i);
            occ[m] += 1;
            int j = b.find(occ);
            trip.emplace_back(j, i, h(m) * std::sqrt(static_cast<double>(occ[m])));
        }
    }
    SpMat out(b.dim(), b.dim());
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

SpMat annihilate(const FockBasis& b, const Vec& h) { return SpMat(create(b, h).adjoint()); }

SpMat field(const FockBasis& b, const Vec& h) {
    SpMat c = create(b, h);
    return SpMat((c + SpMat(c.adjoint())) / std::sqrt(2.0));
}

SpMat number_op(const FockBasis& b) {
    SpMat out(b.dim(), b.dim());
    for (int i = 0; i < b.dim(); ++i) out.insert(i, i) = static_cast<double>(b.total(i));
    out.makeCompressed();
    return out;
}

SpMat sector_projector(const FockBasis& b, int n) {
    SpMat out(b.dim(), b.dim());
    for (int i = 0; i < b.dim(); ++i)
        if (b.total(i) <= n) out.insert(i, i) = 1.0;
    out.makeCompressed();
    return out;
}

SpMat number_weight(const FockBasis& b, double p, double shift) {
    SpMat out(b.dim(), b.dim());
    for (int i = 0; i < b.dim(); ++i)
        out.insert(i, i) = std::pow(b.total(i) + shift, p);
    out.makeCompressed();
    return out;
}

SpMat dGamma(const FockBasis& b, const Mat& op) {
    if (op.rows() != b.n_modes() || op.cols() != b.n_modes())
        throw std::invalid_argument("dGamma: one-particle operator has wrong shape");
    std::vector<Eigen::Triplet<cplx>> trip;
    std::vector<int> occ;
    for (int s = 0; s < b.dim(); ++s) {
        const auto& n = b.state(s);
        cplx diag = 0.0;
        for (int j = 0; j < b.n_modes(); ++j) {
            if (n[j] == 0) continue;
            diag += op(j, j) * static_cast<double>(n[j]);
            for (int i = 0; i < b.n_modes(); ++i) {
                if (i == j || op(i, j) == cplx(0.0)) continue;
                occ = n;
                occ[j] -= 1;
                occ[i] += 1;
                int t = b.find(occ);
                trip.emplace_back(t, s,
                                  op(i, j) * std::sqrt(static_cast<double>(n[j]) *
                                                       static_cast<double>(occ[i])));
            }
        }
        if (diag != cplx(0.0)) trip.emplace_back(s, s, diag);
    }
    SpMat out(b.dim(), b.dim());
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

namespace {

double occ_norm_factor(const std::vector<int>& n) {
    double f = 1.0;
    for (int nj : n)
        for (int r = 2; r <= nj; ++r) f *= r;
    return 1.0 / std::sqrt(f);
}

void check_rect(const FockBasis& dom, const FockBasis& cod, const Mat& op, const char* who) {
    if (op.rows() != cod.n_modes() || op.cols() != dom.n_modes())
        throw std::invalid_argument(std::string(who) + ": operator shape is cod_modes x dom_modes");
    if (cod.n_max() < dom.n_max())
        throw std::invalid_argument(std::string(who) + ": codomain truncation too small");
}

void push_column(std::vector<Eigen::Triplet<cplx>>& trip, const Vec& v, int col) {
    for (Eigen::Index r = 0; r < v.size(); ++r)
        if (v(r) != cplx(0.0)) trip.emplace_back(static_cast<int>(r), col, v(r));
}

}  // namespace

SpMat Gamma(const FockBasis& dom, const FockBasis& cod, const Mat& op) {
    check_rect(dom, cod, op, "Gamma");
    std::vector<SpMat> lifted(dom.n_modes());
    for (int j = 0; j < dom.n_modes(); ++j) lifted[j] = create(cod, op.col(j));

    std::vector<Eigen::Triplet<cplx>> trip;
    for (int s = 0; s < dom.dim(); ++s) {
        const auto& n = dom.state(s);
        Vec v = vacuum(cod);
        for (int j = 0; j < dom.n_modes(); ++j)
            for (int r = 0; r < n[j]; ++r) v = lifted[j] * v;
        v *= occ_norm_factor(n);
        push_column(trip, v, s);
    }
    SpMat out(cod.dim(), dom.dim());
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

SpMat dGamma2(const FockBasis& dom, const FockBasis& cod, const Mat& a, const Mat& b) {
    check_rect(dom, cod, a, "dGamma2");
    check_rect(dom, cod, b, "dGamma2");
    std::vector<SpMat> lift_a(dom.n_modes()), lift_b(dom.n_modes());
    for (int j = 0; j < dom.n_modes(); ++j) {
        lift_a[j] = create(cod, a.col(j));
        lift_b[j] = create(cod, b.col(j));
    }

    std::vector<Eigen::Triplet<cplx>> trip;
    std::vector<int> slots;
    for (int s = 0; s < dom.dim(); ++s) {
        const auto& n = dom.state(s);
        slots.clear();
        for (int j = 0; j < dom.n_modes(); ++j)
            for (int r = 0; r < n[j]; ++r) slots.push_back(j);
        Vec acc = Vec::Zero(cod.dim());
        for (std::size_t pick = 0; pick < slots.size(); ++pick) {
            Vec v = vacuum(cod);
            for (std::size_t i = 0; i < slots.size(); ++i)
                v = (i == pick ? lift_b : lift_a)[slots[i]] * v;
            acc += v;
        }
        acc *= occ_norm_factor(n);
        push_column(trip, acc, s);
    }
    SpMat out(cod.dim(), dom.dim());
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

TruncationReport truncation_report(const FockBasis& b, const Vec& h) {
    FockBasis ext = FockBasis::build(b.n_modes(), b.n_max() + 1,
                                     std::numeric_limits<std::uint64_t>::max());
    SpMat c_ext = create(ext, h);
    int r0 = ext.sector_begin(b.n_max() + 1);
    int r1 = ext.sector_end(b.n_max() + 1);
    int c0 = b.sector_begin(b.n_max());
    int c1 = b.sector_end(b.n_max());
    // Graded-lex ordering makes the shared sectors of b and ext index-identical.
    Mat block = Mat(c_ext).block(r0, c0, r1 - r0, c1 - c0);
    return {b.n_max() - 1, op_norm(block)};
}

}  // namespace focklab
