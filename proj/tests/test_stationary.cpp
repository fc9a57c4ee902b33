#include <doctest.h>

#include "mixdiag/errors.hpp"
#include "mixdiag/montecarlo.hpp"
#include "mixdiag/stationary.hpp"
#include "test_helpers.hpp"

using namespace mixdiag;

namespace {

Var1Model scalar_ar(double a, double var = 1.0) {
    MatrixXd am(1, 1), sm(1, 1);
    am << a;
    sm << var;
    return make_var1(am, sm);
}

} // namespace

TEST_CASE("solve_stationary_var1") {
    SUBCASE("zero transition returns sigma_xi") {
        std::mt19937_64 gen(1);
        const MatrixXd sigma = testutil::std_spd(gen, 3, 0.5, 2.0);
        const Var1Model m = make_var1(MatrixXd::Zero(3, 3), sigma);
        CHECK((solve_stationary_var1(m) - sigma).norm() < 1e-14);
    }
    SUBCASE("scalar geometric series") {
        const MatrixXd gamma = solve_stationary_var1(scalar_ar(0.6));
        CHECK(gamma(0, 0) == doctest::Approx(1.5625).epsilon(1e-12));
    }
    SUBCASE("matches the Kronecker-vectorized oracle") {
        std::mt19937_64 gen(2);
        for (int trial = 0; trial < 5; ++trial) {
            const MatrixXd a = testutil::std_contraction(gen, 3, 0.8);
            const MatrixXd q = testutil::std_spd(gen, 3, 0.5, 2.0);
            const Var1Model m = make_var1(a, q);
            const MatrixXd gamma = solve_stationary_var1(m);
            const MatrixXd oracle = testutil::kron_solve_stationary(a, q);
            CHECK((gamma - oracle).norm() <= 1e-10 * oracle.norm());
        }
    }
    SUBCASE("residual contract holds across random models") {
        std::mt19937_64 gen(3);
        for (int trial = 0; trial < 10; ++trial) {
            const MatrixXd a = testutil::std_contraction(gen, 8, 0.9);
            const MatrixXd q = testutil::std_spd(gen, 8, 0.2, 3.0);
            const Var1Model m = make_var1(a, q);
            const MatrixXd gamma = solve_stationary_var1(m);
            const double residual =
                (gamma - a * gamma * a.transpose() - q).norm();
            CHECK(residual <= 1e-10 * gamma.norm());
        }
    }
}

TEST_CASE("solve_stationary_varma11") {
    SUBCASE("white factor noise") {
        std::mt19937_64 gen(4);
        const MatrixXd lambda = testutil::std_gaussian_matrix(gen, 4, 2);
        const MatrixXd sigma_eta = testutil::std_spd(gen, 2, 0.5, 1.5);
        const MatrixXd sigma_xi = testutil::std_spd(gen, 4, 0.5, 1.5);
        const Varma11Model m = make_varma11(lambda, MatrixXd::Zero(2, 2), sigma_eta, sigma_xi);
        const MatrixXd expected = lambda * sigma_eta * lambda.transpose() + sigma_xi;
        CHECK((solve_stationary_varma11(m) - expected).norm() <= 1e-12 * expected.norm());
    }
    SUBCASE("single factor arithmetic") {
        MatrixXd lambda(2, 1), h(1, 1), eta(1, 1);
        lambda << 1.0, 0.0;
        h << 0.5;
        eta << 1.0;
        const Varma11Model m = make_varma11(lambda, h, eta, MatrixXd::Identity(2, 2));
        const MatrixXd gamma = solve_stationary_varma11(m);
        CHECK(gamma(0, 0) == doctest::Approx(1.0 + 4.0 / 3.0).epsilon(1e-12));
        CHECK(gamma(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(gamma(0, 1)) < 1e-14);
        CHECK(solve_stationary_factor(m)(0, 0) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("factor route equals the VARMA recursion route") {
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            const Varma11Model m = random_varma11(8, 2, 0.5, 0.1, 15.0, seed);
            const MatrixXd gamma = solve_stationary_varma11(m);
            const MatrixXd via_varma =
                m.L * gamma * m.L.transpose() +
                m.Lambda * m.sigma_eta * m.Lambda.transpose() + m.sigma_xi -
                m.L * m.sigma_xi * m.L.transpose();
            CHECK((gamma - via_varma).norm() <= 1e-8 * gamma.norm());
        }
    }
}

TEST_CASE("lag_cross_cov") {
    SUBCASE("independence gives the zero matrix") {
        const Var1Model m = make_var1(MatrixXd::Zero(2, 2), MatrixXd::Identity(2, 2));
        CHECK(lag_cross_cov(m, solve_stationary_var1(m), 1).norm() == 0.0);
    }
    SUBCASE("scalar recursion") {
        const Var1Model m = scalar_ar(0.6);
        const MatrixXd gamma = solve_stationary_var1(m);
        CHECK(lag_cross_cov(m, gamma, 3)(0, 0) == doctest::Approx(0.3375).epsilon(1e-12));
    }
    SUBCASE("norm contraction per extra lag") {
        const Var1Model m = random_var1(6, 3, 0.7, 0.1, 10.0, 5);
        const MatrixXd gamma = solve_stationary_var1(m);
        const double norm_a = spectral_norm(m.A);
        double prev = spectral_norm(lag_cross_cov(m, gamma, 1));
        for (int n = 2; n <= 8; ++n) {
            const double cur = spectral_norm(lag_cross_cov(m, gamma, n));
            CHECK(cur <= norm_a * prev * (1.0 + 1e-12));
            prev = cur;
        }
    }
    SUBCASE("VARMA lag-2 cross-covariance matches simulation") {
        const Varma11Model m = random_varma11(6, 2, 0.5, 0.1, 15.0, 21);
        const MatrixXd gamma = solve_stationary_varma11(m);
        const MatrixXd expected = lag_cross_cov(m, gamma, 2);

        // Repeated-seed study: the empirical mean of each entry should sit
        // within three standard errors of the analytic value.
        const int reps = 20;
        const int T = 50000;
        std::vector<std::vector<double>> entries(
            static_cast<std::size_t>(m.p) * m.p);
        for (int rep = 0; rep < reps; ++rep) {
            const SimulationRun run =
                simulate(m, gamma, T, 1000 + static_cast<std::uint64_t>(rep));
            const Eigen::RowVectorXd mean = run.path.colwise().mean();
            const MatrixXd centered = run.path.rowwise() - mean;
            const MatrixXd hat = centered.bottomRows(T - 2).transpose() *
                                 centered.topRows(T - 2) / static_cast<double>(T);
            for (int i = 0; i < m.p; ++i)
                for (int j = 0; j < m.p; ++j)
                    entries[static_cast<std::size_t>(i) * m.p + j].push_back(hat(i, j));
        }
        for (int i = 0; i < m.p; ++i) {
            for (int j = 0; j < m.p; ++j) {
                const auto stats =
                    testutil::mean_se(entries[static_cast<std::size_t>(i) * m.p + j]);
                CHECK(std::abs(stats.mean - expected(i, j)) <= 3.0 * stats.se + 1e-4);
            }
        }
    }
}

TEST_CASE("assemble_joint") {
    SUBCASE("2x2 correlation block") {
        MatrixXd gamma(1, 1), gamma1(1, 1);
        gamma << 1.0;
        gamma1 << 0.6;
        const StationaryCovariances cov = assemble_joint(gamma, gamma1);
        MatrixXd expected(2, 2);
        expected << 1.0, 0.6, 0.6, 1.0;
        CHECK((cov.sigma2p - expected).norm() == 0.0);
        CHECK(cov.sigma2p_tilde(0, 1) == 0.0);
    }
    SUBCASE("perfect lag-1 dependence is singular") {
        MatrixXd gamma = MatrixXd::Identity(2, 2);
        CHECK_THROWS_AS(assemble_joint(gamma, gamma), NotPositiveDefinite);
    }
    SUBCASE("diagonal blocks are bit-identical to gamma") {
        const Var1Model m = random_var1(5, 2, 0.5, 0.1, 10.0, 17);
        const StationaryCovariances cov = stationary_covariances(m);
        CHECK(cov.sigma2p.topLeftCorner(5, 5) == cov.gamma);
        CHECK(cov.sigma2p.bottomRightCorner(5, 5) == cov.gamma);
        CHECK(cov.sigma2p == cov.sigma2p.transpose().eval());
        CHECK(cov.residual <= 1e-10 * cov.gamma.norm());
    }
    SUBCASE("joint covariance matches simulated pairs") {
        const Var1Model m = random_var1(4, 2, 0.6, 0.2, 10.0, 23);
        const StationaryCovariances cov = stationary_covariances(m);

        const int reps = 20;
        const int T = 20000;
        std::vector<std::vector<double>> entries(64);
        for (int rep = 0; rep < reps; ++rep) {
            const SimulationRun run =
                simulate(m, cov.gamma, T, 500 + static_cast<std::uint64_t>(rep));
            MatrixXd pairs(T - 1, 8);
            pairs.leftCols(4) = run.path.topRows(T - 1);
            pairs.rightCols(4) = run.path.bottomRows(T - 1);
            const Eigen::RowVectorXd mean = pairs.colwise().mean();
            const MatrixXd centered = pairs.rowwise() - mean;
            const MatrixXd hat =
                centered.transpose() * centered / static_cast<double>(T - 1);
            for (int i = 0; i < 8; ++i)
                for (int j = 0; j < 8; ++j)
                    entries[static_cast<std::size_t>(i) * 8 + j].push_back(hat(i, j));
        }
        for (int i = 0; i < 8; ++i) {
            for (int j = 0; j < 8; ++j) {
                const auto stats =
                    testutil::mean_se(entries[static_cast<std::size_t>(i) * 8 + j]);
                CHECK(std::abs(stats.mean - cov.sigma2p(i, j)) <= 3.0 * stats.se + 1e-4);
            }
        }
    }
}

TEST_CASE("doubling route equals Kronecker route at larger sizes") {
    std::mt19937_64 gen(9);
    for (int n : {5, 12, 30}) {
        const MatrixXd a = testutil::std_contraction(gen, n, 0.85);
        const MatrixXd q = testutil::std_spd(gen, n, 0.3, 2.0);
        const MatrixXd gamma = solve_stationary_var1(make_var1(a, q));
        const MatrixXd oracle = testutil::kron_solve_stationary(a, q);
        CHECK((gamma - oracle).norm() <= 1e-9 * oracle.norm());
    }
}
