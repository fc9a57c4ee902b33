#ifndef MIXDIAG_LEMMAS_HPP
#define MIXDIAG_LEMMAS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mixdiag/linalg.hpp"

namespace mixdiag {

/// Outcome of one executable matrix-identity check. Inputs that violate a
/// check's precondition throw PreconditionFailed and are never counted as
/// check failures.
struct LemmaCheck {
    std::string name;
    bool passed = false;
    double worst_violation = 0.0;
    std::optional<std::pair<MatrixXd, MatrixXd>> witness;  ///< inputs, on failure
};

/// 2*[[A,B],[B^T,A]]^{-1} - blockdiag(A,A)^{-1} is positive definite
/// whenever A and the block matrix are. Requires both PD.
LemmaCheck check_invcovdiff_pd(const MatrixXd& A, const MatrixXd& B);

/// The Schur complement W = (2*Omega^{-1} - I) - 4 D P^{-1} (2P^{-1}-I)^{-1} P^{-1} D^T
/// with Omega = I - D D^T, P = I - D^T D has eigenvalue multiset
/// {(1 - l)/(1 + l)} over the eigenvalues l of D D^T. Requires ||D|| < 1;
/// l = 0 (rank-deficient D) is admitted and maps to 1.
LemmaCheck check_schur_eig_map(const MatrixXd& D);

/// For A PD and B PSD, every eigenvalue of A*B is real and non-negative,
/// and the spectrum agrees with that of A^{1/2} B A^{1/2}.
LemmaCheck check_product_spectrum(const MatrixXd& A, const MatrixXd& B);

/// sigma_min(I - L) >= 1 - ||L|| for ||L|| < 1.
LemmaCheck check_singular_min_bound(const MatrixXd& L);

struct LemmaSuiteResult {
    std::string name;
    int instances = 0;
    int passes = 0;
    double worst_violation = 0.0;
    std::optional<std::pair<MatrixXd, MatrixXd>> witness;
};

/// Runs every lemma check on instances_per_lemma random inputs spread over
/// the given sizes, from one master seed. injected_bias > 0 is a test hook
/// that inflates each measured violation to exercise the failure path.
std::vector<LemmaSuiteResult> run_lemma_suites(int instances_per_lemma,
                                               std::span<const int> sizes,
                                               std::uint64_t seed,
                                               double injected_bias = 0.0);

} // namespace mixdiag

#endif
