#ifndef MIXDIAG_STATIONARY_HPP
#define MIXDIAG_STATIONARY_HPP

#include "mixdiag/models.hpp"

namespace mixdiag {

/// Stationary second-moment structure of a model: the marginal covariance,
/// the lag-1 cross-covariance Cov(X(t+1), X(t)), and the assembled joint /
/// block-diagonal covariances of (X(t), X(t+1)).
struct StationaryCovariances {
    MatrixXd gamma;          ///< p x p, symmetric PD
    MatrixXd gamma1;         ///< p x p, Cov(X(t+1), X(t))
    MatrixXd sigma2p;        ///< [[gamma, gamma1^T], [gamma1, gamma]]
    MatrixXd sigma2p_tilde;  ///< blockdiag(gamma, gamma)
    double residual = 0.0;   ///< Lyapunov residual norm of the gamma solve
};

/// Solves gamma = A gamma A^T + sigma_xi by doubling iteration, with a
/// Kronecker-vectorized fallback for small p. Residual <= 1e-10 * ||gamma||.
MatrixXd solve_stationary_var1(const Var1Model& model);

/// Factor covariance from the k x k Lyapunov solve, then
/// gamma = Lambda gamma_F Lambda^T + sigma_xi. Cross-checks the VARMA(1,1)
/// representation gamma = L gamma L^T + Lambda sigma_eta Lambda^T
/// + sigma_xi - L sigma_xi L^T and throws ConsistencyFailure on disagreement.
MatrixXd solve_stationary_varma11(const Varma11Model& model);

/// Stationary covariance of the k-dimensional factor process alone.
MatrixXd solve_stationary_factor(const Varma11Model& model);

/// Cov(X(t+n), X(t)). Lag 1 is A*gamma (VAR) or L*(gamma - sigma_xi)
/// (VARMA); higher lags follow the recursion gamma(n) = A*gamma(n-1)
/// resp. L*gamma(n-1).
MatrixXd lag_cross_cov(const Var1Model& model, const MatrixXd& gamma, int n);
MatrixXd lag_cross_cov(const Varma11Model& model, const MatrixXd& gamma, int n);

/// Assembles sigma2p / sigma2p_tilde from gamma and the lag-1 cross-
/// covariance; verifies sigma2p is PD. residual is carried through from
/// the solve that produced gamma.
StationaryCovariances assemble_joint(const MatrixXd& gamma, const MatrixXd& gamma1,
                                     double residual = 0.0);

/// solve + lag-1 + assemble in one step.
StationaryCovariances stationary_covariances(const Var1Model& model);
StationaryCovariances stationary_covariances(const Varma11Model& model);

} // namespace mixdiag

#endif
