#include "focklab/split.hpp"

#include <cmath>
#include <stdexcept>

namespace focklab {

TensorBasis TensorBasis::build(const FockBasis& f1, const FockBasis& f2, int n_max) {
    if (n_max > f1.n_max() || n_max > f2.n_max())
        throw std::invalid_argument("TensorBasis: factor truncations below joint cutoff");
    TensorBasis t;
    t.f1_ = &f1;
    t.f2_ = &f2;
    t.n_max_ = n_max;
    t.index_.assign(f1.dim(), std::vector<int>(f2.dim(), -1));
    for (int n = 0; n <= n_max; ++n)
        for (int k2 = 0; k2 <= n; ++k2) {
            int k1 = n - k2;
            for (int i1 = f1.sector_begin(k1); i1 < f1.sector_end(k1); ++i1)
                for (int i2 = f2.sector_begin(k2); i2 < f2.sector_end(k2); ++i2) {
                    t.index_[i1][i2] = static_cast<int>(t.pairs_.size());
                    t.pairs_.emplace_back(i1, i2);
                }
        }
    return t;
}

int TensorBasis::find(int i1, int i2) const { return index_[i1][i2]; }

SpMat TensorBasis::embed_left(const SpMat& a) const {
    std::vector<Eigen::Triplet<cplx>> trip;
    for (int c = 0; c < dim(); ++c) {
        auto [i1, i2] = pairs_[c];
        for (SpMat::InnerIterator it(a, i1); it; ++it) {
            int r = find(static_cast<int>(it.row()), i2);
            if (r >= 0) trip.emplace_back(r, c, it.value());
        }
    }
    SpMat out(dim(), dim());
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

SpMat TensorBasis::embed_right(const SpMat& b) const {
    std::vector<Eigen::Triplet<cplx>> trip;
    for (int c = 0; c < dim(); ++c) {
        auto [i1, i2] = pairs_[c];
        for (SpMat::InnerIterator it(b, i2); it; ++it) {
            int r = find(i1, static_cast<int>(it.row()));
            if (r >= 0) trip.emplace_back(r, c, it.value());
        }
    }
    SpMat out(dim(), dim());
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

SpMat TensorBasis::kron_op(const SpMat& a, const SpMat& b) const {
    return SpMat(embed_left(a) * embed_right(b));
}

SpMat TensorBasis::number_left() const {
    SpMat out(dim(), dim());
    for (int i = 0; i < dim(); ++i) out.insert(i, i) = static_cast<double>(f1_->total(pairs_[i].first));
    out.makeCompressed();
    return out;
}

SpMat TensorBasis::number_right() const {
    SpMat out(dim(), dim());
    for (int i = 0; i < dim(); ++i) out.insert(i, i) = static_cast<double>(f2_->total(pairs_[i].second));
    out.makeCompressed();
    return out;
}

SpMat TensorBasis::right_sector_projector(int n) const {
    SpMat out(dim(), dim());
    for (int i = 0; i < dim(); ++i)
        if (f2_->total(pairs_[i].second) <= n) out.insert(i, i) = 1.0;
    out.makeCompressed();
    return out;
}

Vec TensorBasis::pure(const Vec& v1, const Vec& v2) const {
    Vec out = Vec::Zero(dim());
    for (int i = 0; i < dim(); ++i) {
        auto [i1, i2] = pairs_[i];
        out(i) = v1(i1) * v2(i2);
    }
    return out;
}

SpMat split_unitary(const FockBasis& joint, const TensorBasis& tensor) {
    const FockBasis& f1 = tensor.f1();
    const FockBasis& f2 = tensor.f2();
    if (joint.n_modes() != f1.n_modes() + f2.n_modes())
        throw std::invalid_argument("split_unitary: joint modes != factor modes");
    if (joint.n_max() != tensor.n_max())
        throw std::invalid_argument("split_unitary: cutoff mismatch");
    // On occupation states the symmetrization binomial of the sector formula
    // cancels against the two factor normalizations, leaving coefficient one:
    // the map is the bijection (n, m) -> n (x) m.
    SpMat out(tensor.dim(), joint.dim());
    std::vector<int> occ1(f1.n_modes()), occ2(f2.n_modes());
    for (int s = 0; s < joint.dim(); ++s) {
        const auto& occ = joint.state(s);
        std::copy(occ.begin(), occ.begin() + f1.n_modes(), occ1.begin());
        std::copy(occ.begin() + f1.n_modes(), occ.end(), occ2.begin());
        int i1 = f1.find(occ1);
        int i2 = f2.find(occ2);
        int r = tensor.find(i1, i2);
        if (i1 < 0 || i2 < 0 || r < 0)
            throw std::logic_error("split_unitary: basis mismatch");
        out.insert(r, s) = 1.0;
    }
    out.makeCompressed();
    return out;
}

double SplitPair::partition_defect() const {
    switch (kind) {
        case PartitionKind::isometric:
            return op_norm(Mat(j0.adjoint() * j0 + jinf.adjoint() * jinf -
                               Mat::Identity(j0.cols(), j0.cols())));
        case PartitionKind::summing:
            if (j0.rows() != j0.cols())
                throw std::invalid_argument("SplitPair: summing partition needs square blocks");
            return op_norm(Mat(j0 + jinf - Mat::Identity(j0.rows(), j0.cols())));
    }
    throw std::logic_error("SplitPair: unknown kind");
}

namespace {
Mat stack(const SplitPair& j) {
    Mat s(j.j0.rows() + j.jinf.rows(), j.j0.cols());
    s.topRows(j.j0.rows()) = j.j0;
    s.bottomRows(j.jinf.rows()) = j.jinf;
    return s;
}
}  // namespace

SpMat gamma_split(const SplitPair& j, const FockBasis& dom, const FockBasis& doubled,
                  const TensorBasis& tensor) {
    SpMat u = split_unitary(doubled, tensor);
    return SpMat(u * Gamma(dom, doubled, stack(j)));
}

SpMat gamma_check_op(const SplitPair& j, const FockBasis& dom, const FockBasis& doubled,
                     const TensorBasis& tensor) {
    if (j.kind != PartitionKind::isometric)
        throw std::invalid_argument("gamma_check_op: partition_kind mismatch, need isometric");
    return gamma_split(j, dom, doubled, tensor);
}

SpMat dGamma_split(const SplitPair& j, const SplitPair& dj, const FockBasis& dom,
                   const FockBasis& doubled, const TensorBasis& tensor) {
    SpMat u = split_unitary(doubled, tensor);
    return SpMat(u * dGamma2(dom, doubled, stack(j), stack(dj)));
}

SpMat scattering_identification(const FockBasis& dom, const FockBasis& doubled,
                                const TensorBasis& tensor) {
    int m = dom.n_modes();
    Mat iota(m, 2 * m);
    iota << Mat::Identity(m, m), Mat::Identity(m, m);
    SpMat u = split_unitary(doubled, tensor);
    return SpMat(Gamma(doubled, dom, iota) * SpMat(u.adjoint()));
}

double identification_bound_check(const FockBasis& dom, const FockBasis& doubled,
                                  const TensorBasis& tensor, int k) {
    SpMat ident = scattering_identification(dom, doubled, tensor);
    // (N0 + 1)^{-k} on the left factor times chi(N_inf <= k) on the right.
    SpMat w(tensor.dim(), tensor.dim());
    for (int i = 0; i < tensor.dim(); ++i) {
        auto [i1, i2] = tensor.pair(i);
        if (tensor.f2().total(i2) <= k)
            w.insert(i, i) = std::pow(tensor.f1().total(i1) + 1.0, -static_cast<double>(k));
    }
    w.makeCompressed();
    return op_norm(Mat(ident * w));
}

}  // namespace focklab
