#ifndef MIXDIAG_PHI2_HPP
#define MIXDIAG_PHI2_HPP

#include <string>
#include <vector>

#include "mixdiag/stationary.hpp"

namespace mixdiag {

/// Pearson's phi^2 of (X(t), X(t+1)) from the 2p-dimensional Gaussian
/// determinant formula
///   phi^2 = -1 + |sigma_tilde|^{1/2} |(2 sigma^{-1} - sigma_tilde^{-1})^{-1}|^{1/2} / |sigma|,
/// evaluated in log-determinant space.
double phi2_general(const StationaryCovariances& cov);

/// Closed form for VAR(1): phi^2 = -1 + 1 / |I - gamma^{-1} A gamma A^T|,
/// computed through the congruent symmetric spectrum.
double phi2_var1_closed(const MatrixXd& A, const MatrixXd& gamma);

/// Closed form for VARMA(1,1):
/// phi^2 = -1 + 1 / |I - gamma^{-1}(gamma - sigma_xi) L^T gamma^{-1} L (gamma - sigma_xi)|.
double phi2_varma_closed(const MatrixXd& L, const MatrixXd& gamma, const MatrixXd& sigma_xi);

/// Product identity phi^2 = -1 + prod_i 1/(1 - r_i^2) over canonical
/// correlations r_i in [0, 1), as expm1(-sum log(1 - r_i^2)).
double phi2_from_canonical_corrs(const std::vector<double>& r);

/// Assumption-based upper bounds: (zeta/delta)^k - 1 and
/// (zeta/(delta (1-mu)^2))^k - 1. Require 0 < delta < zeta (and 0 <= mu < 1).
double phi2_bound_var1(int k, double delta, double zeta);
double phi2_bound_varma(int k, double delta, double zeta, double mu);

struct Phi2Report {
    double phi2_general = 0.0;
    double phi2_closed = 0.0;
    double log1p_phi2 = 0.0;              ///< log(1 + phi^2), overflow-safe carrier
    double bound = 0.0;
    std::vector<double> canonical_corrs;  ///< lag-1, sorted descending
    std::string paper_bound_note;
};

/// Both phi^2 routes, the canonical correlations and the analytic bound
/// for one model. For VARMA the bound uses mu = measured ||L|| unless a
/// larger mu is supplied.
Phi2Report phi2_report(const Var1Model& model, const StationaryCovariances& cov,
                       double delta, double zeta);
Phi2Report phi2_report(const Varma11Model& model, const StationaryCovariances& cov,
                       double delta, double zeta, double mu = -1.0);

} // namespace mixdiag

#endif
