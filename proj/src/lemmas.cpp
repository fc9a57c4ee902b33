#include "mixdiag/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixdiag/errors.hpp"
#include "mixdiag/rng.hpp"

namespace mixdiag {

namespace {

MatrixXd gaussian_matrix(CounterRng& rng, int rows, int cols) {
    MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = rng.gaussian();
    return m;
}

MatrixXd random_spd(CounterRng& rng, int n) {
    const MatrixXd g = gaussian_matrix(rng, n, n);
    Eigen::HouseholderQR<MatrixXd> qr(g);
    const MatrixXd q = qr.householderQ();
    VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = rng.uniform(0.5, 2.0);
    return symmetrize(q * d.asDiagonal() * q.transpose());
}

MatrixXd random_contraction(CounterRng& rng, int n, double norm) {
    MatrixXd m = gaussian_matrix(rng, n, n);
    const double s = spectral_norm(m);
    if (s > 0.0) m *= norm / s;
    return m;
}

VectorXd sorted_eigenvalues_sym(const MatrixXd& s) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrize(s), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

} // namespace

LemmaCheck check_invcovdiff_pd(const MatrixXd& A, const MatrixXd& B) {
    const auto n = A.rows();
    if (A.cols() != n || B.rows() != n || B.cols() != n)
        throw DimensionMismatch("check_invcovdiff_pd: A and B must be square, equal size");

    if (min_eigenvalue_sym(A) <= 0.0)
        throw PreconditionFailed("check_invcovdiff_pd: A is not positive definite");
    MatrixXd joint(2 * n, 2 * n);
    joint.topLeftCorner(n, n) = A;
    joint.topRightCorner(n, n) = B;
    joint.bottomLeftCorner(n, n) = B.transpose();
    joint.bottomRightCorner(n, n) = A;
    if (min_eigenvalue_sym(joint) <= 0.0)
        throw PreconditionFailed("check_invcovdiff_pd: block matrix is not positive definite");

    MatrixXd m;
    try {
        m = two_inv_minus_blockdiag_inv(joint, A);
    } catch (const NotPositiveDefinite& e) {
        throw PreconditionFailed(std::string("check_invcovdiff_pd: ") + e.what());
    }
    const VectorXd eig = sorted_eigenvalues_sym(m);

    LemmaCheck check;
    check.name = "invcovdiff_pd";
    check.worst_violation = std::max(0.0, -eig.minCoeff());
    check.passed = eig.minCoeff() > -kPdSlack * eig.maxCoeff();
    if (!check.passed) check.witness = std::make_pair(A, B);
    return check;
}

LemmaCheck check_schur_eig_map(const MatrixXd& D) {
    const auto n = D.rows();
    if (D.cols() != n) throw DimensionMismatch("check_schur_eig_map: D must be square");
    if (!(spectral_norm(D) < 1.0))
        throw PreconditionFailed("check_schur_eig_map: requires ||D|| < 1");

    const MatrixXd i = MatrixXd::Identity(n, n);
    const MatrixXd ddt = D * D.transpose();
    const MatrixXd omega = i - ddt;
    const MatrixXd p = i - D.transpose() * D;

    const MatrixXd p_inv = p.llt().solve(i);
    const MatrixXd two_pinv_minus_i = 2.0 * p_inv - i;
    const MatrixXd inner = two_pinv_minus_i.llt().solve(i);

    // Sub-identity from the same computation: (2P^{-1}-I)^{-1} = P - P D^T S^{-1} D P
    // with S = I - (D D^T)^2 (renamed from the source's overloaded symbol).
    const MatrixXd s = i - ddt * ddt;
    const MatrixXd inner_alt = p - p * D.transpose() * s.llt().solve(D * p);
    const double sub_identity_dev =
        (inner - inner_alt).norm() / std::max(1.0, inner.norm());

    const MatrixXd w =
        2.0 * omega.llt().solve(i) - i - 4.0 * D * p_inv * inner * p_inv * D.transpose();

    VectorXd actual = sorted_eigenvalues_sym(w);
    VectorXd lambdas = sorted_eigenvalues_sym(ddt).cwiseMax(0.0);
    VectorXd expected(n);
    for (Eigen::Index idx = 0; idx < n; ++idx)
        expected(idx) = (1.0 - lambdas(idx)) / (1.0 + lambdas(idx));
    std::sort(expected.data(), expected.data() + n);

    LemmaCheck check;
    check.name = "schur_eig_map";
    const double multiset_dev = (actual - expected).cwiseAbs().maxCoeff();
    check.worst_violation = std::max(multiset_dev, sub_identity_dev);
    check.passed = check.worst_violation <= 1e-8;
    if (!check.passed) check.witness = std::make_pair(D, MatrixXd());
    return check;
}

LemmaCheck check_product_spectrum(const MatrixXd& A, const MatrixXd& B) {
    const auto n = A.rows();
    if (A.cols() != n || B.rows() != n || B.cols() != n)
        throw DimensionMismatch("check_product_spectrum: A and B must be square, equal size");
    if (min_eigenvalue_sym(A) <= 0.0)
        throw PreconditionFailed("check_product_spectrum: A is not positive definite");
    {
        const VectorXd eb = sorted_eigenvalues_sym(B);
        if (eb.minCoeff() < -kPdSlack * std::max(1.0, eb.maxCoeff()))
            throw PreconditionFailed("check_product_spectrum: B is not positive semidefinite");
    }

    Eigen::EigenSolver<MatrixXd> es(A * B, /*computeEigenvectors=*/false);
    const Eigen::VectorXcd eig = es.eigenvalues();
    const double scale = 1.0 + eig.cwiseAbs().maxCoeff();

    const double imag_dev = eig.imag().cwiseAbs().maxCoeff();
    const double real_dev = std::max(0.0, -eig.real().minCoeff());

    const MatrixXd root = sym_sqrt(A);
    VectorXd sym_spec = sorted_eigenvalues_sym(root * B * root);
    VectorXd real_spec = eig.real();
    std::sort(real_spec.data(), real_spec.data() + n);
    const double match_dev = (sym_spec - real_spec).cwiseAbs().maxCoeff();

    LemmaCheck check;
    check.name = "product_spectrum";
    check.worst_violation = std::max({imag_dev, real_dev, match_dev});
    check.passed = check.worst_violation <= 1e-8 * scale;
    if (!check.passed) check.witness = std::make_pair(A, B);
    return check;
}

LemmaCheck check_singular_min_bound(const MatrixXd& L) {
    if (L.rows() != L.cols())
        throw DimensionMismatch("check_singular_min_bound: L must be square");
    const double norm_l = spectral_norm(L);
    if (!(norm_l < 1.0))
        throw PreconditionFailed("check_singular_min_bound: requires ||L|| < 1");

    Eigen::JacobiSVD<MatrixXd> svd(MatrixXd::Identity(L.rows(), L.cols()) - L);
    const double sigma_min = svd.singularValues().minCoeff();

    LemmaCheck check;
    check.name = "singular_min_bound";
    check.worst_violation = std::max(0.0, (1.0 - norm_l) - sigma_min);
    check.passed = check.worst_violation <= 1e-10;
    if (!check.passed) check.witness = std::make_pair(L, MatrixXd());
    return check;
}

std::vector<LemmaSuiteResult> run_lemma_suites(int instances_per_lemma,
                                               std::span<const int> sizes,
                                               std::uint64_t seed, double injected_bias) {
    if (instances_per_lemma < 1) throw OutOfRange("run_lemma_suites: need instances >= 1");
    if (sizes.empty()) throw OutOfRange("run_lemma_suites: need at least one size");

    enum { invcovdiff, schur, product, singular, kCount };
    std::vector<LemmaSuiteResult> results(kCount);
    results[invcovdiff].name = "invcovdiff_pd";
    results[schur].name = "schur_eig_map";
    results[product].name = "product_spectrum";
    results[singular].name = "singular_min_bound";

    for (int which = 0; which < kCount; ++which) {
        CounterRng rng(seed, static_cast<std::uint64_t>(which) + 1);
        LemmaSuiteResult& suite = results[which];
        for (int i = 0; i < instances_per_lemma; ++i) {
            const int n = sizes[static_cast<std::size_t>(i) % sizes.size()];
            LemmaCheck check;
            MatrixXd in1, in2;
            switch (which) {
                case invcovdiff: {
                    in1 = random_spd(rng, n);
                    const MatrixXd contraction =
                        random_contraction(rng, n, rng.uniform(0.1, 0.95));
                    const MatrixXd root = sym_sqrt(in1);
                    in2 = root * contraction * root;
                    check = check_invcovdiff_pd(in1, in2);
                    break;
                }
                case schur: {
                    in1 = random_contraction(rng, n, rng.uniform(0.1, 0.95));
                    if (n > 1 && i % 5 == 0) in1.col(0).setZero();  // exercise lambda = 0
                    check = check_schur_eig_map(in1);
                    break;
                }
                case product: {
                    in1 = random_spd(rng, n);
                    if (i % 3 == 0) {
                        const MatrixXd g = gaussian_matrix(rng, n, 1);  // rank one
                        in2 = g * g.transpose();
                    } else {
                        const MatrixXd g = gaussian_matrix(rng, n, n);
                        in2 = symmetrize(g * g.transpose() / static_cast<double>(n));
                    }
                    check = check_product_spectrum(in1, in2);
                    break;
                }
                default: {
                    in1 = random_contraction(rng, n, rng.uniform(0.1, 0.95));
                    check = check_singular_min_bound(in1);
                    break;
                }
            }
            if (injected_bias > 0.0) {
                check.worst_violation += injected_bias;
                check.passed = false;
            }
            if (!check.passed && !check.witness) check.witness = std::make_pair(in1, in2);
            suite.instances += 1;
            suite.passes += check.passed ? 1 : 0;
            suite.worst_violation = std::max(suite.worst_violation, check.worst_violation);
            if (!check.passed && !suite.witness) suite.witness = check.witness;
        }
    }
    return results;
}

} // namespace mixdiag
