#ifndef MIXDIAG_MIXING_HPP
#define MIXDIAG_MIXING_HPP

#include <vector>

#include "mixdiag/stationary.hpp"

namespace mixdiag {

/// Singular values of gamma^{-1/2} * cross * gamma^{-1/2}, descending,
/// clamped to [0, 1]. Values above 1 + 1e-10 signal inconsistent inputs
/// and throw OutOfRange.
std::vector<double> canonical_correlations(const MatrixXd& gamma, const MatrixXd& cross);

/// rho(n): the maximal correlation between X(t) and X(t+n). For jointly
/// Gaussian vectors the supremum over square-integrable f, g is attained
/// by linear functions, so this is the top canonical correlation at lag n.
double rho_n(const Var1Model& model, const MatrixXd& gamma, int n);
double rho_n(const Varma11Model& model, const MatrixXd& gamma, int n);

struct SubmultCheck {
    bool passed = true;
    double worst_violation = 0.0;  ///< max over m of rho(mN) - rho(N)^m, floored at 0
};

/// Markov contraction at stride N: rho(mN) <= rho(N)^m + 1e-10 for all m
/// with mN within the table. rho is indexed by lag, rho[0] = rho(1).
SubmultCheck submultiplicativity_check(const std::vector<double>& rho, int N);

struct DecayFit {
    double A = 0.0;      ///< envelope amplitude
    double gamma = 0.0;  ///< envelope rate: rho(n) <= A * exp(-gamma * n)
};

/// Least-squares fit of log rho(n) against n; the returned amplitude is
/// raised so the envelope dominates every computed point exactly.
/// Zero entries are excluded from the fit. Throws DegenerateInput when
/// fewer than two positive values remain.
DecayFit decay_fit(const std::vector<double>& rho);

/// Explicit constants for the exponential-decay lifting: given a
/// non-increasing sequence with a_{nM} <= C * c^n on the prefix, returns
/// gamma = -ln(c)/M and A = C/c with a_n <= A e^{-gamma n} verified for
/// every prefix element. a is indexed from n = 1.
DecayFit expodecay_lift(const std::vector<double>& a, int M, double c, double C);

struct MixingReport {
    std::vector<double> rho;  ///< rho[i] = rho(i+1), lags 1..n_max
    double fitted_A = 0.0;
    double fitted_gamma = 0.0;
    double kappa = 0.0;       ///< rho(N), the certified contraction
    int N = 1;                ///< first lag with rho < 1
};

MixingReport mixing_report(const Var1Model& model, const MatrixXd& gamma, int n_max = 20);
MixingReport mixing_report(const Varma11Model& model, const MatrixXd& gamma, int n_max = 20);

} // namespace mixdiag

#endif
