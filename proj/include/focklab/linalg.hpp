#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace focklab {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<cplx>;

constexpr cplx iu{0.0, 1.0};

Mat kron(const Mat& a, const Mat& b);

// Largest singular value.
double op_norm(const Mat& a);
double op_norm(const SpMat& a);

bool is_hermitian(const Mat& a, double tol = 1e-10);

// Smallest eigenvalue of a Hermitian matrix.
double min_eig_herm(const Mat& a);

// f applied to a Hermitian matrix through its eigendecomposition.
Mat herm_fn(const Mat& a, const std::function<double(double)>& f);

// Hermitian eigendecomposition, values ascending.
struct EigenSystem {
    RVec vals;
    Mat vecs;
};
EigenSystem eigensolve(const Mat& h, double herm_tol = 1e-9);

// Least-squares line through (log x, log y); points with y <= 0 are rejected.
struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
};
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);
SlopeFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

// C-infinity step: 0 for x <= 0, 1 for x >= 1.
double smooth_step(double x);

// Smooth window equal to 1 on [lo+edge, hi-edge], 0 outside [lo, hi].
double smooth_window(double x, double lo, double hi, double edge);

}  // namespace focklab
