#pragma once

#include <random>

#include "focklab/linalg.hpp"

namespace testutil {

using focklab::cplx;
using focklab::Mat;
using focklab::Vec;

inline Vec random_vec(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> d;
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = cplx(d(rng), d(rng));
    return v;
}

inline Mat random_mat(std::mt19937_64& rng, int rows, int cols) {
    std::normal_distribution<double> d;
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = cplx(d(rng), d(rng));
    return m;
}

inline Mat random_herm(std::mt19937_64& rng, int n) {
    Mat m = random_mat(rng, n, n);
    return 0.5 * (m + Mat(m.adjoint()));
}

inline Mat random_unitary(std::mt19937_64& rng, int n) {
    Eigen::HouseholderQR<Mat> qr(random_mat(rng, n, n));
    Mat q = qr.householderQ();
    return q;
}

// Contraction: scale to operator norm <= 1.
inline Mat random_contraction(std::mt19937_64& rng, int n) {
    Mat m = random_mat(rng, n, n);
    return m / (focklab::op_norm(m) * 1.01);
}

}  // namespace testutil
