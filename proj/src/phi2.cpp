#include "mixdiag/phi2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mixdiag/errors.hpp"

namespace mixdiag {

namespace {

// expm1 overflows past log(DBL_MAX); the log value is still reportable.
constexpr double kLogOverflow = 709.0;

const char* const kBoundNote =
    "bound direction is (zeta/delta)^k - 1 (VARMA: zeta/(delta*(1-mu)^2)); "
    "the reciprocal ratio would be vacuous since delta < zeta always";

// Values within 1e-12 of zero are round-off from the log-determinant
// assembly; snap them to the exact independence value.
double clamp_phi2(double value) {
    return std::abs(value) <= 1e-12 ? 0.0 : value;
}

/// -log det(I - S) = -sum log(1 - s_i) for the symmetric PSD spectrum s_i
/// of the congruent form of the determinant argument. This equals
/// log(1 + phi^2) for both closed forms.
double neg_logdet_identity_minus(const MatrixXd& sym_psd) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrize(sym_psd), Eigen::EigenvaluesOnly);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double s = std::max(es.eigenvalues()(i), 0.0);
        const double arg = 1.0 - s;
        if (arg <= 1e-14)
            throw SingularDeterminant("phi2: determinant argument eigenvalue " +
                                      std::to_string(arg) + " is numerically singular");
        acc -= std::log1p(-s);
    }
    return acc;
}

double phi2_from_log(double log1p_phi2) {
    if (log1p_phi2 > kLogOverflow)
        throw Overflow("phi2: log(1+phi2) = " + std::to_string(log1p_phi2) +
                       " exceeds the representable range");
    return clamp_phi2(std::expm1(log1p_phi2));
}

double log1p_phi2_var1(const MatrixXd& A, const MatrixXd& gamma) {
    if (A.rows() != A.cols() || gamma.rows() != gamma.cols() || A.rows() != gamma.rows())
        throw DimensionMismatch("phi2_var1_closed: A and gamma must be square, equal size");
    const MatrixXd gis = sym_inv_sqrt(gamma);
    return neg_logdet_identity_minus(gis * A * gamma * A.transpose() * gis);
}

double log1p_phi2_varma(const MatrixXd& L, const MatrixXd& gamma, const MatrixXd& sigma_xi) {
    if (L.rows() != L.cols() || gamma.rows() != gamma.cols() ||
        sigma_xi.rows() != sigma_xi.cols() || L.rows() != gamma.rows() ||
        L.rows() != sigma_xi.rows())
        throw DimensionMismatch("phi2_varma_closed: inputs must be square, equal size");
    const MatrixXd gis = sym_inv_sqrt(gamma);
    const MatrixXd cross = L * (gamma - sigma_xi); // = Cov(X(t+1), X(t))
    const MatrixXd m = gis * cross * gis;
    return neg_logdet_identity_minus(m.transpose() * m);
}

/// Canonical correlations of the lag-1 pair: singular values of the
/// whitened cross-covariance, descending, clamped to [0, 1].
std::vector<double> whitened_cross_corrs(const MatrixXd& gamma, const MatrixXd& cross) {
    const MatrixXd gis = sym_inv_sqrt(gamma);
    Eigen::JacobiSVD<MatrixXd> svd(gis * cross * gis);
    std::vector<double> r(svd.singularValues().size());
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = std::clamp(svd.singularValues()(static_cast<Eigen::Index>(i)), 0.0, 1.0);
    return r;
}

Phi2Report build_report(double log_general, double log_closed, double bound,
                        std::vector<double> corrs) {
    Phi2Report report;
    report.log1p_phi2 = log_closed;
    report.phi2_general = log_general > kLogOverflow
                              ? std::numeric_limits<double>::infinity()
                              : clamp_phi2(std::expm1(log_general));
    report.phi2_closed = log_closed > kLogOverflow
                             ? std::numeric_limits<double>::infinity()
                             : clamp_phi2(std::expm1(log_closed));
    report.bound = bound;
    report.canonical_corrs = std::move(corrs);
    report.paper_bound_note = kBoundNote;
    return report;
}

double log1p_phi2_general(const StationaryCovariances& cov) {
    const MatrixXd w = two_inv_minus_blockdiag_inv(cov.sigma2p, cov.gamma);
    const double logdet_sigma = logdet_spd(cov.sigma2p, "phi2_general: sigma2p");
    const double logdet_tilde = 2.0 * logdet_spd(cov.gamma, "phi2_general: gamma");
    const double logdet_w = logdet_spd(w, "phi2_general: 2*sigma^-1 - sigma_tilde^-1");
    return 0.5 * logdet_tilde - 0.5 * logdet_w - logdet_sigma;
}

} // namespace

double phi2_general(const StationaryCovariances& cov) {
    return phi2_from_log(log1p_phi2_general(cov));
}

double phi2_var1_closed(const MatrixXd& A, const MatrixXd& gamma) {
    return phi2_from_log(log1p_phi2_var1(A, gamma));
}

double phi2_varma_closed(const MatrixXd& L, const MatrixXd& gamma, const MatrixXd& sigma_xi) {
    return phi2_from_log(log1p_phi2_varma(L, gamma, sigma_xi));
}

double phi2_from_canonical_corrs(const std::vector<double>& r) {
    double acc = 0.0;
    for (double ri : r) {
        if (!(ri >= 0.0 && ri < 1.0))
            throw OutOfRange("phi2_from_canonical_corrs: r = " + std::to_string(ri) +
                             " outside [0, 1)");
        acc -= std::log1p(-ri * ri);
    }
    return phi2_from_log(acc);
}

double phi2_bound_var1(int k, double delta, double zeta) {
    if (k < 0) throw OutOfRange("phi2_bound_var1: k must be non-negative");
    if (!(delta > 0.0 && delta < zeta))
        throw OutOfRange("phi2_bound_var1: need 0 < delta < zeta");
    return std::pow(zeta / delta, k) - 1.0;
}

double phi2_bound_varma(int k, double delta, double zeta, double mu) {
    if (k < 0) throw OutOfRange("phi2_bound_varma: k must be non-negative");
    if (!(delta > 0.0)) throw OutOfRange("phi2_bound_varma: delta must be positive");
    if (!(mu >= 0.0 && mu < 1.0)) throw OutOfRange("phi2_bound_varma: mu must lie in [0, 1)");
    const double scale = delta * (1.0 - mu) * (1.0 - mu);
    if (!(zeta > scale)) throw OutOfRange("phi2_bound_varma: need zeta > delta*(1-mu)^2");
    return std::pow(zeta / scale, k) - 1.0;
}

Phi2Report phi2_report(const Var1Model& model, const StationaryCovariances& cov,
                       double delta, double zeta) {
    return build_report(log1p_phi2_general(cov), log1p_phi2_var1(model.A, cov.gamma),
                        phi2_bound_var1(model.k, delta, zeta),
                        whitened_cross_corrs(cov.gamma, cov.gamma1));
}

Phi2Report phi2_report(const Varma11Model& model, const StationaryCovariances& cov,
                       double delta, double zeta, double mu) {
    if (mu < 0.0) mu = spectral_norm(model.L);
    return build_report(log1p_phi2_general(cov),
                        log1p_phi2_varma(model.L, cov.gamma, model.sigma_xi),
                        phi2_bound_varma(model.k, delta, zeta, mu),
                        whitened_cross_corrs(cov.gamma, cov.gamma1));
}

} // namespace mixdiag
