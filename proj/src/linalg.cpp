#include "focklab/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace focklab {

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double op_norm(const Mat& a) {
    if (a.size() == 0) return 0.0;
    if (a.rows() <= 64 && a.cols() <= 64) {
        Eigen::JacobiSVD<Mat> svd(a);
        return svd.singularValues()(0);
    }
    Eigen::BDCSVD<Mat> svd(a);
    return svd.singularValues()(0);
}

double op_norm(const SpMat& a) { return op_norm(Mat(a)); }

bool is_hermitian(const Mat& a, double tol) {
    if (a.rows() != a.cols()) return false;
    double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

double min_eig_herm(const Mat& a) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

Mat herm_fn(const Mat& a, const std::function<double(double)>& f) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    RVec d = es.eigenvalues();
    RVec fd(d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) fd(i) = f(d(i));
    return es.eigenvectors() * fd.asDiagonal() * es.eigenvectors().adjoint();
}

EigenSystem eigensolve(const Mat& h, double herm_tol) {
    if (!is_hermitian(h, herm_tol))
        throw std::invalid_argument("eigensolve: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()));
    return {es.eigenvalues(), es.eigenvectors()};
}

SlopeFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_linear: need at least two points");
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-300) throw std::invalid_argument("fit_linear: degenerate abscissae");
    SlopeFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0.0) throw std::invalid_argument("fit_loglog: nonpositive abscissa");
        if (y[i] <= 0.0) continue;
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    if (lx.size() < 2) return {};
    return fit_linear(lx, ly);
}

namespace {
double half_bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
}  // namespace

double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double a = half_bump(x);
    double b = half_bump(1.0 - x);
    return a / (a + b);
}

double smooth_window(double x, double lo, double hi, double edge) {
    if (edge <= 0.0) return (x >= lo && x <= hi) ? 1.0 : 0.0;
    return smooth_step((x - lo) / edge) * smooth_step((hi - x) / edge);
}

}  // namespace focklab
