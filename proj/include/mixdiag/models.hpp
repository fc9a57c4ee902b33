#ifndef MIXDIAG_MODELS_HPP
#define MIXDIAG_MODELS_HPP

#include <cstdint>

#include "mixdiag/linalg.hpp"

namespace mixdiag {

/// Stable VAR(1): X(t) = A X(t-1) + xi(t), xi ~ N(0, sigma_xi).
/// Immutable after construction through make_var1 / random_var1.
struct Var1Model {
    int p = 0;            ///< dimension
    int k = 0;            ///< numerical rank of A
    MatrixXd A;           ///< transition, spectral radius < 1
    MatrixXd sigma_xi;    ///< innovation covariance, symmetric PD
};

/// Low-rank factor VARMA(1,1):
///   X(t) = Lambda F(t) + xi(t),  F(t) = H F(t-1) + eta(t),
/// equivalently X(t) = L X(t-1) + eps(t) with L = Lambda H Lambda^+
/// (Moore-Penrose left inverse) of rank k and ||L|| < 1.
struct Varma11Model {
    int p = 0;
    int k = 0;            ///< factor dimension
    MatrixXd Lambda;      ///< p x k loading, full column rank
    MatrixXd H;           ///< k x k factor transition, spectral radius < 1
    MatrixXd sigma_eta;   ///< k x k factor noise covariance, symmetric PD
    MatrixXd sigma_xi;    ///< p x p idiosyncratic covariance, symmetric PD
    MatrixXd L;           ///< derived p x p transition, rank k, ||L|| < 1
};

/// Growth rule T -> p_T for the triangular-array setting.
struct DimensionSchedule {
    enum class Rule { linear, power, fixed };

    Rule rule = Rule::fixed;
    double c = 1.0;   ///< scale for linear/power
    double a = 1.0;   ///< exponent for power
    int p = 1;        ///< dimension for fixed
    int t_max = 1;

    static DimensionSchedule linear(double c, int t_max);
    static DimensionSchedule power(double c, double a, int t_max);
    static DimensionSchedule fixed(int p, int t_max);
};

/// p_T for 1 <= T <= t_max; non-decreasing in T. Throws OutOfRange.
int dimension_schedule(const DimensionSchedule& schedule, int T);

/// Measured assumption constants of a model against targets (delta, zeta).
/// Failures are flags, never errors.
struct AssumptionCertificate {
    bool varma = false;
    int k_declared = 0;
    int k_measured = 0;
    double lambda_min_sigma_xi = 0.0;
    double lambda_max_gamma = 0.0;
    double transition_norm = 0.0;   ///< ||A|| (VAR) or ||L|| (VARMA)
    double delta = 0.0;
    double zeta = 0.0;
    bool rank_pass = false;         ///< measured rank equals declared k
    bool noise_floor_pass = false;  ///< lambda_min(sigma_xi) > delta
    bool cov_ceiling_pass = false;  ///< lambda_max(gamma) < zeta
    bool contraction_pass = true;   ///< ||L|| < 1 (VARMA only; true for VAR)
    double noise_floor_margin = 0.0;
    double cov_ceiling_margin = 0.0;
    double contraction_margin = 0.0;

    bool passes() const {
        return rank_pass && noise_floor_pass && cov_ceiling_pass && contraction_pass;
    }
};

/// Validates and builds a VAR(1) model; k is set to the numerical rank of A.
Var1Model make_var1(const MatrixXd& A, const MatrixXd& sigma_xi,
                    double rank_tol = kDefaultRankTol);

/// Validates and builds a factor VARMA(1,1) model; derives L = Lambda H Lambda^+.
Varma11Model make_varma11(const MatrixXd& Lambda, const MatrixXd& H,
                          const MatrixXd& sigma_eta, const MatrixXd& sigma_xi);

/// Random VAR(1) with rank-k transition of norm mu_target,
/// lambda_min(sigma_xi) > delta and lambda_max(gamma) < zeta.
/// Deterministic in seed. Throws InfeasibleTargets after bounded retries.
Var1Model random_var1(int p, int k, double mu_target, double delta, double zeta,
                      std::uint64_t seed);

/// Random factor VARMA(1,1) with ||L|| = mu_target and the same
/// (delta, zeta) constraints. Requires k < p.
Varma11Model random_varma11(int p, int k, double mu_target, double delta, double zeta,
                            std::uint64_t seed);

/// gamma must be the stationary covariance of the model.
AssumptionCertificate certify_assumptions(const Var1Model& model, double delta,
                                          double zeta, const MatrixXd& gamma);
AssumptionCertificate certify_assumptions(const Varma11Model& model, double delta,
                                          double zeta, const MatrixXd& gamma);

} // namespace mixdiag

#endif
