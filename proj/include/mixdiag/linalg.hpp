#ifndef MIXDIAG_LINALG_HPP
#define MIXDIAG_LINALG_HPP

#include <Eigen/Dense>

namespace mixdiag {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Singular values below rank_tol * s_max count as zero.
inline constexpr double kDefaultRankTol = 1e-10;

/// A symmetric matrix is accepted as positive definite when
/// lambda_min > -1e-10 * max(1, lambda_max) (symmetric round-off slack).
inline constexpr double kPdSlack = 1e-10;

inline MatrixXd symmetrize(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue_sym(const MatrixXd& s);

/// Largest eigenvalue of a symmetric matrix.
double max_eigenvalue_sym(const MatrixXd& s);

/// Throws NotPositiveDefinite unless s is symmetric positive definite with
/// lambda_min > 1e-12 * max(1, lambda_max), i.e. usable for inversion.
void require_spd(const MatrixXd& s, const char* what);

/// log det of a symmetric positive definite matrix via Cholesky.
double logdet_spd(const MatrixXd& s, const char* what);

/// Symmetric PSD square root (negative round-off eigenvalues clamped to 0).
MatrixXd sym_sqrt(const MatrixXd& s);

/// Symmetric inverse square root, eigenvalues floored at 1e-12 * lambda_max.
MatrixXd sym_inv_sqrt(const MatrixXd& s);

/// Operator (spectral) norm: the largest singular value.
double spectral_norm(const MatrixXd& m);

/// Largest modulus among the (possibly complex) eigenvalues.
double spectral_radius(const MatrixXd& m);

/// Number of singular values above rank_tol * s_max.
int numerical_rank(const MatrixXd& m, double rank_tol = kDefaultRankTol);

/// 2 * joint^{-1} - blockdiag(d, d)^{-1} for a 2n x 2n symmetric PD joint
/// with n x n diagonal blocks d. Shared by the phi2 kernel and the
/// corresponding lemma check. Throws NotPositiveDefinite on unusable inputs.
MatrixXd two_inv_minus_blockdiag_inv(const MatrixXd& joint, const MatrixXd& d);

} // namespace mixdiag

#endif
