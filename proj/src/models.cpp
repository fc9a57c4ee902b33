#include "mixdiag/models.hpp"

#include <cmath>
#include <string>

#include "mixdiag/errors.hpp"
#include "mixdiag/rng.hpp"
#include "mixdiag/stationary.hpp"

namespace mixdiag {

namespace {

constexpr int kGeneratorRetries = 50;

MatrixXd gaussian_matrix(CounterRng& rng, int rows, int cols) {
    MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = rng.gaussian();
    return m;
}

/// Orthogonal factor of a standard Gaussian matrix (orthogonal-invariant).
MatrixXd random_orthogonal(CounterRng& rng, int n) {
    Eigen::HouseholderQR<MatrixXd> qr(gaussian_matrix(rng, n, n));
    MatrixXd q = qr.householderQ();
    // Fix the sign convention so the draw is well defined.
    const MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    return q;
}

/// Q diag(d) Q^T with d uniform on [1.01*delta, 4*delta]: symmetric PD
/// with lambda_min > delta.
MatrixXd random_spd_above(CounterRng& rng, int n, double delta) {
    const MatrixXd q = random_orthogonal(rng, n);
    VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = rng.uniform(1.01 * delta, 4.0 * delta);
    return symmetrize(q * d.asDiagonal() * q.transpose());
}

/// p x k matrix with orthonormal columns scaled by uniform factors in
/// [0.5, 1.5]: full column rank with a non-trivial left inverse.
MatrixXd random_orthogonal_cols(CounterRng& rng, int p, int k) {
    Eigen::HouseholderQR<MatrixXd> qr(gaussian_matrix(rng, p, k));
    MatrixXd q = MatrixXd(qr.householderQ()).leftCols(k);
    for (int j = 0; j < k; ++j) q.col(j) *= rng.uniform(0.5, 1.5);
    return q;
}

/// U diag(s) V^T with exactly k nonzero singular values, rescaled so the
/// largest equals mu_target.
MatrixXd random_rank_k(CounterRng& rng, int n, int k, double mu_target) {
    if (k == 0) return MatrixXd::Zero(n, n);
    const MatrixXd u = random_orthogonal(rng, n);
    const MatrixXd v = random_orthogonal(rng, n);
    VectorXd s = VectorXd::Zero(n);
    for (int i = 0; i < k; ++i) s(i) = rng.uniform(0.5, 1.0);
    s *= mu_target / s.maxCoeff();
    return u * s.asDiagonal() * v.transpose();
}

void check_generator_targets(int p, int k, double mu_target, double delta, double zeta) {
    if (p < 1) throw OutOfRange("generator: p must be positive");
    if (k < 0) throw OutOfRange("generator: k must be non-negative");
    if (!(delta > 0.0)) throw OutOfRange("generator: delta must be positive");
    if (!(delta < zeta)) throw OutOfRange("generator: need delta < zeta");
    if (k > 0 && !(mu_target > 0.0 && mu_target < 1.0))
        throw OutOfRange("generator: mu_target must lie in (0, 1)");
}

/// Largest c in (0, 1] with c*lambda_max(gamma) < zeta and
/// c*lambda_min(sigma) > delta, with a small margin on both sides.
/// Returns 0 when no such c exists.
double shrink_factor(double lam_max_gamma, double lam_min_sigma, double delta, double zeta) {
    if (lam_max_gamma < zeta) return 1.0;
    const double upper = zeta / lam_max_gamma;   // c below this meets zeta
    const double lower = delta / lam_min_sigma;  // c above this keeps delta
    const double c = 0.999 * upper;
    if (c <= lower * 1.001 || c >= 1.0) return 0.0;
    return c;
}

} // namespace

Var1Model make_var1(const MatrixXd& A, const MatrixXd& sigma_xi, double rank_tol) {
    if (A.rows() != A.cols() || sigma_xi.rows() != sigma_xi.cols() ||
        A.rows() != sigma_xi.rows())
        throw DimensionMismatch("make_var1: A and sigma_xi must be square and equal size");
    if (A.rows() < 1) throw DimensionMismatch("make_var1: empty model");

    Var1Model model;
    model.p = static_cast<int>(A.rows());
    model.A = A;
    model.sigma_xi = symmetrize(sigma_xi);

    require_spd(model.sigma_xi, "make_var1: sigma_xi");
    const double radius = spectral_radius(A);
    if (!(radius < 1.0))
        throw NotStable("make_var1: spectral radius of A is " + std::to_string(radius));
    model.k = numerical_rank(A, rank_tol);
    return model;
}

Varma11Model make_varma11(const MatrixXd& Lambda, const MatrixXd& H,
                          const MatrixXd& sigma_eta, const MatrixXd& sigma_xi) {
    const auto p = Lambda.rows();
    const auto k = Lambda.cols();
    if (k < 1 || p < k) throw DimensionMismatch("make_varma11: Lambda must be p x k with p >= k >= 1");
    if (H.rows() != k || H.cols() != k) throw DimensionMismatch("make_varma11: H must be k x k");
    if (sigma_eta.rows() != k || sigma_eta.cols() != k)
        throw DimensionMismatch("make_varma11: sigma_eta must be k x k");
    if (sigma_xi.rows() != p || sigma_xi.cols() != p)
        throw DimensionMismatch("make_varma11: sigma_xi must be p x p");

    if (numerical_rank(Lambda) < k)
        throw RankDeficientLoading("make_varma11: Lambda is not of full column rank");

    Varma11Model model;
    model.p = static_cast<int>(p);
    model.k = static_cast<int>(k);
    model.Lambda = Lambda;
    model.H = H;
    model.sigma_eta = symmetrize(sigma_eta);
    model.sigma_xi = symmetrize(sigma_xi);

    require_spd(model.sigma_eta, "make_varma11: sigma_eta");
    require_spd(model.sigma_xi, "make_varma11: sigma_xi");

    // L = Lambda H Lambda^+ with the Moore-Penrose left inverse.
    const MatrixXd left_inv = (Lambda.transpose() * Lambda).ldlt().solve(Lambda.transpose());
    model.L = Lambda * H * left_inv;

    const double norm_l = spectral_norm(model.L);
    if (!(norm_l < 1.0))
        throw NotContractive("make_varma11: ||L|| = " + std::to_string(norm_l));
    const double radius_h = spectral_radius(H);
    if (!(radius_h < 1.0))
        throw NotStable("make_varma11: spectral radius of H is " + std::to_string(radius_h));
    return model;
}

Var1Model random_var1(int p, int k, double mu_target, double delta, double zeta,
                      std::uint64_t seed) {
    if (k > p) throw DimensionMismatch("random_var1: k must not exceed p");
    check_generator_targets(p, k, mu_target, delta, zeta);

    CounterRng rng(seed);
    for (int attempt = 0; attempt < kGeneratorRetries; ++attempt) {
        const MatrixXd A = random_rank_k(rng, p, k, mu_target);
        MatrixXd sigma = random_spd_above(rng, p, delta);
        Var1Model model = make_var1(A, sigma);
        const MatrixXd gamma = solve_stationary_var1(model);
        const double c = shrink_factor(max_eigenvalue_sym(gamma),
                                       min_eigenvalue_sym(sigma), delta, zeta);
        if (c == 0.0) continue;
        if (c < 1.0) model.sigma_xi *= c;
        return model;
    }
    throw InfeasibleTargets("random_var1: could not satisfy (k, delta, zeta, mu) after " +
                            std::to_string(kGeneratorRetries) + " attempts");
}

Varma11Model random_varma11(int p, int k, double mu_target, double delta, double zeta,
                            std::uint64_t seed) {
    if (k >= p) throw DimensionMismatch("random_varma11: requires k < p");
    if (k < 1) throw OutOfRange("random_varma11: k must be positive");
    check_generator_targets(p, k, mu_target, delta, zeta);

    CounterRng rng(seed);
    for (int attempt = 0; attempt < kGeneratorRetries; ++attempt) {
        // Full-column-rank loading with non-trivial column scales.
        MatrixXd Lambda = random_orthogonal_cols(rng, p, k);
        MatrixXd H = random_rank_k(rng, k, k, 0.5);
        const MatrixXd sigma_eta = random_spd_above(rng, k, delta);
        MatrixXd sigma_xi = random_spd_above(rng, p, delta);

        // Rescale H so that ||L|| = mu_target exactly (L is linear in H).
        const MatrixXd left_inv =
            (Lambda.transpose() * Lambda).ldlt().solve(Lambda.transpose());
        const double norm_l = spectral_norm(Lambda * H * left_inv);
        H *= mu_target / norm_l;

        Varma11Model model = make_varma11(Lambda, H, sigma_eta, sigma_xi);
        const MatrixXd gamma = solve_stationary_varma11(model);
        const double c = shrink_factor(max_eigenvalue_sym(gamma),
                                       min_eigenvalue_sym(sigma_xi), delta, zeta);
        if (c == 0.0) continue;
        if (c < 1.0) {
            // gamma is linear in (sigma_eta, sigma_xi) jointly.
            model.sigma_eta *= c;
            model.sigma_xi *= c;
        }
        return model;
    }
    throw InfeasibleTargets("random_varma11: could not satisfy targets after " +
                            std::to_string(kGeneratorRetries) + " attempts");
}

namespace {

AssumptionCertificate certify_common(int k_declared, int k_measured, double norm,
                                     bool varma, const MatrixXd& sigma_xi,
                                     const MatrixXd& gamma, double delta, double zeta) {
    AssumptionCertificate cert;
    cert.varma = varma;
    cert.k_declared = k_declared;
    cert.k_measured = k_measured;
    cert.lambda_min_sigma_xi = min_eigenvalue_sym(sigma_xi);
    cert.lambda_max_gamma = max_eigenvalue_sym(gamma);
    cert.transition_norm = norm;
    cert.delta = delta;
    cert.zeta = zeta;
    cert.rank_pass = (k_measured == k_declared);
    cert.noise_floor_pass = cert.lambda_min_sigma_xi > delta;
    cert.cov_ceiling_pass = cert.lambda_max_gamma < zeta;
    cert.noise_floor_margin = cert.lambda_min_sigma_xi - delta;
    cert.cov_ceiling_margin = zeta - cert.lambda_max_gamma;
    if (varma) {
        cert.contraction_pass = norm < 1.0;
        cert.contraction_margin = 1.0 - norm;
    }
    return cert;
}

} // namespace

AssumptionCertificate certify_assumptions(const Var1Model& model, double delta,
                                          double zeta, const MatrixXd& gamma) {
    return certify_common(model.k, numerical_rank(model.A), spectral_norm(model.A),
                          false, model.sigma_xi, gamma, delta, zeta);
}

AssumptionCertificate certify_assumptions(const Varma11Model& model, double delta,
                                          double zeta, const MatrixXd& gamma) {
    return certify_common(model.k, numerical_rank(model.L), spectral_norm(model.L),
                          true, model.sigma_xi, gamma, delta, zeta);
}

DimensionSchedule DimensionSchedule::linear(double c, int t_max) {
    if (!(c > 0.0)) throw OutOfRange("schedule: linear slope must be positive");
    if (t_max < 1) throw OutOfRange("schedule: t_max must be positive");
    DimensionSchedule s;
    s.rule = Rule::linear;
    s.c = c;
    s.t_max = t_max;
    return s;
}

DimensionSchedule DimensionSchedule::power(double c, double a, int t_max) {
    if (!(c > 0.0)) throw OutOfRange("schedule: power scale must be positive");
    if (!(a >= 0.0)) throw OutOfRange("schedule: power exponent must be non-negative");
    if (t_max < 1) throw OutOfRange("schedule: t_max must be positive");
    DimensionSchedule s;
    s.rule = Rule::power;
    s.c = c;
    s.a = a;
    s.t_max = t_max;
    return s;
}

DimensionSchedule DimensionSchedule::fixed(int p, int t_max) {
    if (p < 1) throw OutOfRange("schedule: fixed dimension must be positive");
    if (t_max < 1) throw OutOfRange("schedule: t_max must be positive");
    DimensionSchedule s;
    s.rule = Rule::fixed;
    s.p = p;
    s.t_max = t_max;
    return s;
}

int dimension_schedule(const DimensionSchedule& schedule, int T) {
    if (T < 1 || T > schedule.t_max)
        throw OutOfRange("dimension_schedule: T = " + std::to_string(T) +
                         " outside [1, " + std::to_string(schedule.t_max) + "]");
    switch (schedule.rule) {
        case DimensionSchedule::Rule::linear:
            return std::max(1, static_cast<int>(std::ceil(schedule.c * T)));
        case DimensionSchedule::Rule::power:
            return std::max(1, static_cast<int>(std::ceil(
                                   schedule.c * std::pow(static_cast<double>(T), schedule.a))));
        case DimensionSchedule::Rule::fixed:
            return schedule.p;
    }
    throw OutOfRange("dimension_schedule: unknown rule");
}

} // namespace mixdiag
