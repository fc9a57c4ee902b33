#include "mixdiag/stationary.hpp"

#include <string>

#include "mixdiag/errors.hpp"

namespace mixdiag {

namespace {

constexpr double kConvergenceTol = 1e-12;
constexpr double kResidualTol = 1e-10;
constexpr int kMaxIterations = 200;

double lyapunov_residual(const MatrixXd& a, const MatrixXd& q, const MatrixXd& gamma) {
    return (gamma - a * gamma * a.transpose() - q).norm();
}

/// Doubling iteration for gamma = a gamma a^T + q: after j steps the
/// partial sum covers 2^j terms of sum_i a^i q a^i^T.
MatrixXd solve_dlyap_doubling(const MatrixXd& a, const MatrixXd& q) {
    MatrixXd gamma = q;
    MatrixXd ak = a;
    for (int it = 0; it < kMaxIterations; ++it) {
        const MatrixXd update = ak * gamma * ak.transpose();
        gamma = symmetrize(gamma + update);
        if (update.norm() <= kConvergenceTol * gamma.norm()) return gamma;
        ak = ak * ak;
    }
    throw NoConvergence("lyapunov: doubling iteration exhausted its budget "
                        "(spectral radius too close to 1?)");
}

/// Kronecker-vectorized linear solve (I - a (x) a) vec(gamma) = vec(q).
MatrixXd solve_dlyap_kron(const MatrixXd& a, const MatrixXd& q) {
    const auto n = a.rows();
    MatrixXd lhs = MatrixXd::Identity(n * n, n * n);
    // (a (x) a)(i*n+j, k*n+l) = a(i,k) * a(j,l) for column-stacked vec.
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index k = 0; k < n; ++k)
                for (Eigen::Index l = 0; l < n; ++l)
                    lhs(i + j * n, k + l * n) -= a(i, k) * a(j, l);
    const VectorXd rhs = Eigen::Map<const VectorXd>(q.data(), n * n);
    const VectorXd x = lhs.partialPivLu().solve(rhs);
    return symmetrize(Eigen::Map<const MatrixXd>(x.data(), n, n));
}

MatrixXd solve_dlyap(const MatrixXd& a, const MatrixXd& q) {
    MatrixXd gamma;
    try {
        gamma = solve_dlyap_doubling(a, q);
    } catch (const NoConvergence&) {
        if (a.rows() > 64) throw;
        gamma = solve_dlyap_kron(a, q);
    }
    const double residual = lyapunov_residual(a, q, gamma);
    if (residual > kResidualTol * gamma.norm())
        throw NoConvergence("lyapunov: residual " + std::to_string(residual) +
                            " exceeds tolerance");
    return gamma;
}

} // namespace

MatrixXd solve_stationary_var1(const Var1Model& model) {
    MatrixXd gamma = solve_dlyap(model.A, model.sigma_xi);
    require_spd(gamma, "solve_stationary_var1: gamma");
    return gamma;
}

MatrixXd solve_stationary_factor(const Varma11Model& model) {
    return solve_dlyap(model.H, model.sigma_eta);
}

MatrixXd solve_stationary_varma11(const Varma11Model& model) {
    const MatrixXd gamma_f = solve_stationary_factor(model);
    const MatrixXd gamma =
        symmetrize(model.Lambda * gamma_f * model.Lambda.transpose() + model.sigma_xi);
    require_spd(gamma, "solve_stationary_varma11: gamma");

    // The VARMA(1,1) form must reproduce the same covariance:
    // gamma = L gamma L^T + Lambda sigma_eta Lambda^T + sigma_xi - L sigma_xi L^T.
    const MatrixXd via_varma = model.L * gamma * model.L.transpose() +
                               model.Lambda * model.sigma_eta * model.Lambda.transpose() +
                               model.sigma_xi -
                               model.L * model.sigma_xi * model.L.transpose();
    const double mismatch = (gamma - via_varma).norm();
    if (mismatch > 1e-8 * gamma.norm())
        throw ConsistencyFailure("solve_stationary_varma11: factor route and VARMA route "
                                 "disagree by " + std::to_string(mismatch));
    return gamma;
}

MatrixXd lag_cross_cov(const Var1Model& model, const MatrixXd& gamma, int n) {
    if (n < 1) throw OutOfRange("lag_cross_cov: n must be positive");
    if (gamma.rows() != model.p || gamma.cols() != model.p)
        throw DimensionMismatch("lag_cross_cov: gamma has wrong size");
    MatrixXd cross = model.A * gamma;
    for (int i = 1; i < n; ++i) cross = model.A * cross;
    return cross;
}

MatrixXd lag_cross_cov(const Varma11Model& model, const MatrixXd& gamma, int n) {
    if (n < 1) throw OutOfRange("lag_cross_cov: n must be positive");
    if (gamma.rows() != model.p || gamma.cols() != model.p)
        throw DimensionMismatch("lag_cross_cov: gamma has wrong size");
    MatrixXd cross = model.L * (gamma - model.sigma_xi);
    for (int i = 1; i < n; ++i) cross = model.L * cross;
    return cross;
}

StationaryCovariances assemble_joint(const MatrixXd& gamma, const MatrixXd& gamma1,
                                     double residual) {
    const auto p = gamma.rows();
    if (gamma.cols() != p || gamma1.rows() != p || gamma1.cols() != p)
        throw DimensionMismatch("assemble_joint: gamma and gamma1 must be p x p");
    require_spd(gamma, "assemble_joint: gamma");

    StationaryCovariances cov;
    cov.gamma = gamma;
    cov.gamma1 = gamma1;
    cov.residual = residual;

    cov.sigma2p.resize(2 * p, 2 * p);
    cov.sigma2p.topLeftCorner(p, p) = gamma;
    cov.sigma2p.topRightCorner(p, p) = gamma1.transpose();
    cov.sigma2p.bottomLeftCorner(p, p) = gamma1;
    cov.sigma2p.bottomRightCorner(p, p) = gamma;

    cov.sigma2p_tilde = MatrixXd::Zero(2 * p, 2 * p);
    cov.sigma2p_tilde.topLeftCorner(p, p) = gamma;
    cov.sigma2p_tilde.bottomRightCorner(p, p) = gamma;

    require_spd(cov.sigma2p, "assemble_joint: sigma2p");
    return cov;
}

StationaryCovariances stationary_covariances(const Var1Model& model) {
    const MatrixXd gamma = solve_stationary_var1(model);
    const double residual = lyapunov_residual(model.A, model.sigma_xi, gamma);
    return assemble_joint(gamma, lag_cross_cov(model, gamma, 1), residual);
}

StationaryCovariances stationary_covariances(const Varma11Model& model) {
    const MatrixXd gamma = solve_stationary_varma11(model);
    const MatrixXd gamma_f = solve_stationary_factor(model);
    const double residual = lyapunov_residual(model.H, model.sigma_eta, gamma_f);
    return assemble_joint(gamma, lag_cross_cov(model, gamma, 1), residual);
}

} // namespace mixdiag
