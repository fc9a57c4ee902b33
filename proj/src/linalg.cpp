#include "mixdiag/linalg.hpp"

#include <cmath>
#include <string>

#include "mixdiag/errors.hpp"

namespace mixdiag {

double min_eigenvalue_sym(const MatrixXd& s) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrize(s), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double max_eigenvalue_sym(const MatrixXd& s) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrize(s), Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

void require_spd(const MatrixXd& s, const char* what) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrize(s), Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 1e-12 * std::max(1.0, hi)))
        throw NotPositiveDefinite(std::string(what) + ": lambda_min = " + std::to_string(lo));
}

double logdet_spd(const MatrixXd& s, const char* what) {
    Eigen::LLT<MatrixXd> llt(symmetrize(s));
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite(std::string(what) + ": Cholesky failed");
    return 2.0 * MatrixXd(llt.matrixL()).diagonal().array().log().sum();
}

MatrixXd sym_sqrt(const MatrixXd& s) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrize(s));
    VectorXd d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

MatrixXd sym_inv_sqrt(const MatrixXd& s) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrize(s));
    const double hi = es.eigenvalues().maxCoeff();
    if (!(hi > 0.0)) throw NotPositiveDefinite("sym_inv_sqrt: matrix is not positive");
    const double floor = 1e-12 * hi;
    VectorXd d = es.eigenvalues().cwiseMax(floor).cwiseSqrt().cwiseInverse();
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

double spectral_norm(const MatrixXd& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<MatrixXd> svd(m);
    return svd.singularValues()(0);
}

double spectral_radius(const MatrixXd& m) {
    Eigen::EigenSolver<MatrixXd> es(m, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

int numerical_rank(const MatrixXd& m, double rank_tol) {
    Eigen::JacobiSVD<MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0) return 0;
    const double cut = rank_tol * sv(0);
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++r;
    return r;
}

MatrixXd two_inv_minus_blockdiag_inv(const MatrixXd& joint, const MatrixXd& d) {
    const auto n = d.rows();
    if (d.cols() != n || joint.rows() != 2 * n || joint.cols() != 2 * n)
        throw DimensionMismatch("two_inv_minus_blockdiag_inv: joint must be 2n x 2n");
    Eigen::LLT<MatrixXd> llt_joint(symmetrize(joint));
    if (llt_joint.info() != Eigen::Success)
        throw NotPositiveDefinite("two_inv_minus_blockdiag_inv: joint covariance not PD");
    Eigen::LLT<MatrixXd> llt_d(symmetrize(d));
    if (llt_d.info() != Eigen::Success)
        throw NotPositiveDefinite("two_inv_minus_blockdiag_inv: diagonal block not PD");

    MatrixXd result = 2.0 * llt_joint.solve(MatrixXd::Identity(2 * n, 2 * n));
    const MatrixXd d_inv = llt_d.solve(MatrixXd::Identity(n, n));
    result.topLeftCorner(n, n) -= d_inv;
    result.bottomRightCorner(n, n) -= d_inv;
    return symmetrize(result);
}

} // namespace mixdiag
