#pragma once

#include "focklab/basis.hpp"
#include "focklab/linalg.hpp"

namespace focklab {

// Second-quantized operators on the truncated Fock space.  Creation is the
// compression P a*(h) P onto the kept basis; annihilation is its adjoint, so
// the CCR and all commutation identities that move at most one quantum hold
// exactly on the sector projection chi(N <= n_max - 1).

Vec vacuum(const FockBasis& b);

SpMat create_mode(const FockBasis& b, int mode);            // a*_j
SpMat create(const FockBasis& b, const Vec& h);             // a*(h), linear in h
SpMat annihilate(const FockBasis& b, const Vec& h);         // a(h), antilinear in h
SpMat field(const FockBasis& b, const Vec& h);              // (a(h) + a*(h)) / sqrt(2)
SpMat number_op(const FockBasis& b);                        // dGamma(1)

// chi(N <= n): diagonal projector onto total quanta at most n.
SpMat sector_projector(const FockBasis& b, int n);

// Diagonal weight (N + shift)^p.
SpMat number_weight(const FockBasis& b, double p, double shift = 1.0);

// dGamma(op) for a one-particle operator (n_modes x n_modes); quanta-preserving,
// exact on the truncation.
SpMat dGamma(const FockBasis& b, const Mat& op);

// Gamma(op) for op: dom modes -> cod modes with ||op|| arbitrary; sector-wise
// tensor power assembled from creation products, exact on the truncation since
// it preserves total quanta.  Requires cod.n_max >= dom.n_max.
SpMat Gamma(const FockBasis& dom, const FockBasis& cod, const Mat& op);

// dGamma(a, b) = sum over quanta slots of a x ... x b(slot) x ... x a, for
// a, b: dom modes -> cod modes.
SpMat dGamma2(const FockBasis& dom, const FockBasis& cod, const Mat& a, const Mat& b);

// How the truncation bites: operator norm of the block of a*(h) mapping the top
// kept sector out of the truncation, plus the cutoff below which one creation
// stays inside.
struct TruncationReport {
    int safe_cutoff;       // chi(N <= safe_cutoff) is untouched by one creation
    double leakage_norm;   // ||(1 - P) a*(h) P|| over the discarded sector
};
TruncationReport truncation_report(const FockBasis& b, const Vec& h);

}  // namespace focklab
