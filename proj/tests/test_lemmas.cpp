#include <doctest.h>

#include <array>
#include <cmath>

#include "mixdiag/errors.hpp"
#include "mixdiag/lemmas.hpp"
#include "test_helpers.hpp"

using namespace mixdiag;

TEST_CASE("check_invcovdiff_pd") {
    SUBCASE("zero off-diagonal block reduces to the block-diagonal inverse") {
        std::mt19937_64 gen(1);
        const MatrixXd a = testutil::std_spd(gen, 3, 0.5, 2.0);
        const LemmaCheck check = check_invcovdiff_pd(a, MatrixXd::Zero(3, 3));
        CHECK(check.passed);
        CHECK(check.worst_violation == 0.0);
    }
    SUBCASE("identity blocks with scaled coupling") {
        const LemmaCheck check =
            check_invcovdiff_pd(MatrixXd::Identity(2, 2), 0.5 * MatrixXd::Identity(2, 2));
        CHECK(check.passed);
    }
    SUBCASE("precondition violations are not lemma failures") {
        CHECK_THROWS_AS(check_invcovdiff_pd(-MatrixXd::Identity(2, 2), MatrixXd::Zero(2, 2)),
                        PreconditionFailed);
        // Coupling too strong: block matrix indefinite.
        CHECK_THROWS_AS(
            check_invcovdiff_pd(MatrixXd::Identity(2, 2), 1.5 * MatrixXd::Identity(2, 2)),
            PreconditionFailed);
    }
    SUBCASE("random instances with contractive coupling all pass") {
        std::mt19937_64 gen(2);
        for (int trial = 0; trial < 100; ++trial) {
            const int n = std::array{1, 2, 5}[static_cast<std::size_t>(trial % 3)];
            const MatrixXd a = testutil::std_spd(gen, n, 0.3, 3.0);
            const MatrixXd root = a.llt().matrixL();
            const MatrixXd d = testutil::std_contraction(gen, n, 0.9);
            const LemmaCheck check = check_invcovdiff_pd(a, root * d * root.transpose());
            CHECK(check.passed);
        }
    }
}

TEST_CASE("check_schur_eig_map") {
    SUBCASE("zero D maps everything to one") {
        const LemmaCheck check = check_schur_eig_map(MatrixXd::Zero(3, 3));
        CHECK(check.passed);
        CHECK(check.worst_violation <= 1e-12);
    }
    SUBCASE("diagonal example has the two mapped eigenvalues") {
        MatrixXd d = MatrixXd::Zero(2, 2);
        d(0, 0) = 0.6;
        d(1, 1) = 0.3;
        const LemmaCheck check = check_schur_eig_map(d);
        CHECK(check.passed);
        // (1 - 0.36)/(1 + 0.36) and (1 - 0.09)/(1 + 0.09)
        const MatrixXd i = MatrixXd::Identity(2, 2);
        const MatrixXd omega = i - d * d.transpose();
        const MatrixXd p = i - d.transpose() * d;
        const MatrixXd p_inv = p.inverse();
        const MatrixXd w = 2.0 * omega.inverse() - i -
                           4.0 * d * p_inv * (2.0 * p_inv - i).inverse() * p_inv *
                               d.transpose();
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(w);
        CHECK(es.eigenvalues()(0) == doctest::Approx(0.470588235294).epsilon(1e-9));
        CHECK(es.eigenvalues()(1) == doctest::Approx(0.834862385321).epsilon(1e-9));
    }
    SUBCASE("rank-deficient D admits the zero eigenvalue") {
        MatrixXd d = MatrixXd::Zero(3, 3);
        d(0, 1) = 0.5;  // rank 1
        const LemmaCheck check = check_schur_eig_map(d);
        CHECK(check.passed);
    }
    SUBCASE("norm at or above one is a precondition failure") {
        CHECK_THROWS_AS(check_schur_eig_map(MatrixXd::Identity(2, 2)), PreconditionFailed);
    }
    SUBCASE("random contractions match the multiset to 1e-8") {
        std::mt19937_64 gen(3);
        for (int trial = 0; trial < 60; ++trial) {
            const int n = std::array{1, 2, 5, 20}[static_cast<std::size_t>(trial % 4)];
            const LemmaCheck check =
                check_schur_eig_map(testutil::std_contraction(gen, n, 0.9));
            CHECK(check.passed);
        }
    }
}

TEST_CASE("check_product_spectrum") {
    SUBCASE("identity B returns the spectrum of A") {
        std::mt19937_64 gen(4);
        const MatrixXd a = testutil::std_spd(gen, 4, 0.5, 2.0);
        const LemmaCheck check = check_product_spectrum(a, MatrixXd::Identity(4, 4));
        CHECK(check.passed);
    }
    SUBCASE("rank-1 B leaves exactly one positive eigenvalue") {
        std::mt19937_64 gen(5);
        const MatrixXd a = testutil::std_spd(gen, 5, 0.5, 2.0);
        const MatrixXd g = testutil::std_gaussian_matrix(gen, 5, 1);
        const MatrixXd b = g * g.transpose();
        const LemmaCheck check = check_product_spectrum(a, b);
        CHECK(check.passed);

        Eigen::EigenSolver<MatrixXd> es(a * b, false);
        int positive = 0, near_zero = 0;
        for (Eigen::Index i = 0; i < 5; ++i) {
            const double real = es.eigenvalues()(i).real();
            if (real > 1e-8) ++positive;
            if (std::abs(real) <= 1e-8) ++near_zero;
        }
        CHECK(positive == 1);
        CHECK(near_zero == 4);
    }
    SUBCASE("indefinite A fails the precondition") {
        MatrixXd a = MatrixXd::Identity(2, 2);
        a(1, 1) = -1.0;
        CHECK_THROWS_AS(check_product_spectrum(a, MatrixXd::Identity(2, 2)),
                        PreconditionFailed);
    }
    SUBCASE("random PD x PSD products all pass") {
        std::mt19937_64 gen(6);
        for (int trial = 0; trial < 60; ++trial) {
            const int n = std::array{1, 2, 5, 20}[static_cast<std::size_t>(trial % 4)];
            const MatrixXd a = testutil::std_spd(gen, n, 0.2, 3.0);
            const MatrixXd g = testutil::std_gaussian_matrix(gen, n, n);
            const MatrixXd b = g * g.transpose() / static_cast<double>(n);
            CHECK(check_product_spectrum(a, b).passed);
        }
    }
}

TEST_CASE("check_singular_min_bound") {
    SUBCASE("zero L attains equality at one") {
        const LemmaCheck check = check_singular_min_bound(MatrixXd::Zero(3, 3));
        CHECK(check.passed);
        CHECK(check.worst_violation == 0.0);
    }
    SUBCASE("scalar multiples of the identity attain equality") {
        const LemmaCheck check = check_singular_min_bound(0.5 * MatrixXd::Identity(4, 4));
        CHECK(check.passed);
        CHECK(check.worst_violation <= 1e-12);
    }
    SUBCASE("expanding L fails the precondition") {
        CHECK_THROWS_AS(check_singular_min_bound(MatrixXd::Identity(2, 2)),
                        PreconditionFailed);
    }
    SUBCASE("random contractions all pass") {
        std::mt19937_64 gen(7);
        for (int trial = 0; trial < 60; ++trial) {
            const int n = std::array{1, 2, 5, 20}[static_cast<std::size_t>(trial % 4)];
            CHECK(check_singular_min_bound(testutil::std_contraction(gen, n, 0.8)).passed);
        }
    }
}

TEST_CASE("run_lemma_suites") {
    const std::array<int, 4> sizes{1, 2, 5, 20};
    SUBCASE("all suites pass on honest tolerances") {
        const auto suites = run_lemma_suites(100, sizes, 2025);
        REQUIRE(suites.size() == 4);
        for (const auto& suite : suites) {
            CHECK(suite.instances == 100);
            CHECK(suite.passes == 100);
            CHECK_FALSE(suite.witness.has_value());
        }
    }
    SUBCASE("deterministic in the master seed") {
        const auto a = run_lemma_suites(20, sizes, 99);
        const auto b = run_lemma_suites(20, sizes, 99);
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(a[i].worst_violation == b[i].worst_violation);
    }
    SUBCASE("injected fault trips every instance and ships a witness") {
        const auto suites = run_lemma_suites(10, sizes, 7, 0.1);
        for (const auto& suite : suites) {
            CHECK(suite.passes == 0);
            CHECK(suite.worst_violation >= 0.1);
            REQUIRE(suite.witness.has_value());
            CHECK(suite.witness->first.size() > 0);
        }
    }
}
