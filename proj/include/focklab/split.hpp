#pragma once

#include <utility>

#include "focklab/basis.hpp"
#include "focklab/ops.hpp"

namespace focklab {

// Truncated tensor product F(h1) (x) F(h2) at joint total quanta <= n_max,
// i.e. the direct sum over n <= n_max of the blocks F_{n-k} (x) F_k.  Pairs
// are ordered by joint total, then quanta in the second factor, then the two
// factor indices, so the factorization map from F(h1 + h2) is a pure
// re-indexing.
class TensorBasis {
  public:
    static TensorBasis build(const FockBasis& f1, const FockBasis& f2, int n_max);

    int dim() const { return static_cast<int>(pairs_.size()); }
    int n_max() const { return n_max_; }
    const FockBasis& f1() const { return *f1_; }
    const FockBasis& f2() const { return *f2_; }
    std::pair<int, int> pair(int i) const { return pairs_[i]; }
    int find(int i1, int i2) const;

    // P (A (x) 1) P and P (1 (x) B) P on the joint truncation.
    SpMat embed_left(const SpMat& a) const;
    SpMat embed_right(const SpMat& b) const;
    SpMat kron_op(const SpMat& a, const SpMat& b) const;

    // Joint quanta count N1 + N2 and the two factor counts.
    SpMat number_left() const;
    SpMat number_right() const;

    // Projector onto second-factor quanta <= n.
    SpMat right_sector_projector(int n) const;

    Vec pure(const Vec& v1, const Vec& v2) const;  // truncated v1 (x) v2

  private:
    const FockBasis* f1_ = nullptr;
    const FockBasis* f2_ = nullptr;
    int n_max_ = 0;
    std::vector<std::pair<int, int>> pairs_;
    std::vector<std::vector<int>> index_;  // index_[i1][i2] or -1
};

// Unitary F(h1 + h2) -> F(h1) (x) F(h2).  `joint` is the basis over the
// n1 + n2 concatenated modes with the same cutoff; the matrix is a signed-free
// permutation (the symmetrization binomials cancel exactly).
SpMat split_unitary(const FockBasis& joint, const TensorBasis& tensor);

enum class PartitionKind { isometric, summing };

// Pair of one-particle localization operators (j0, j_inf), each cod x dom.
struct SplitPair {
    Mat j0, jinf;
    PartitionKind kind = PartitionKind::isometric;

    // Largest deviation from j0* j0 + jinf* jinf = 1 (isometric) or
    // j0 + jinf = 1 (summing); square operators only for summing.
    double partition_defect() const;
};

// Gamma-check of a split pair: U Gamma([j0; jinf]) : F(h) -> F(h) (x) F(h),
// the stacked map sending h to (j0 h, jinf h) in the doubled modes.
// `doubled` is the basis over the concatenated (doubled) modes.  Works for
// either partition kind; gamma_check_op enforces the isometric kind.
SpMat gamma_split(const SplitPair& j, const FockBasis& dom, const FockBasis& doubled,
                  const TensorBasis& tensor);
SpMat gamma_check_op(const SplitPair& j, const FockBasis& dom, const FockBasis& doubled,
                     const TensorBasis& tensor);

// Mixed insertion U dGamma((j0,jinf), (d0,dinf)) : F(h) -> F(h) (x) F(h).
SpMat dGamma_split(const SplitPair& j, const SplitPair& dj, const FockBasis& dom,
                   const FockBasis& doubled, const TensorBasis& tensor);

// I = Gamma(iota) U* with iota(h0, hinf) = h0 + hinf, mapping the tensor space
// back to F(h); right inverse of gamma_split for a summing pair.
SpMat scattering_identification(const FockBasis& dom, const FockBasis& doubled,
                                const TensorBasis& tensor);

// || I ((N+1)^{-k} (x) chi(N <= k)) ||: the identification is bounded after
// number weighting.
double identification_bound_check(const FockBasis& dom, const FockBasis& doubled,
                                  const TensorBasis& tensor, int k);

}  // namespace focklab
