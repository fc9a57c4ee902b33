#include <doctest.h>

#include <cmath>

#include "mixdiag/errors.hpp"
#include "mixdiag/phi2.hpp"
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

TEST_CASE("phi2_general") {
    SUBCASE("independence gives zero") {
        std::mt19937_64 gen(1);
        const MatrixXd gamma = testutil::std_spd(gen, 3, 0.5, 2.0);
        const StationaryCovariances cov = assemble_joint(gamma, MatrixXd::Zero(3, 3));
        CHECK(phi2_general(cov) == 0.0);
    }
    SUBCASE("scalar closed form") {
        const Var1Model m = scalar_ar(0.6);
        const StationaryCovariances cov = stationary_covariances(m);
        CHECK(phi2_general(cov) == doctest::Approx(0.5625).epsilon(1e-12));
    }
    SUBCASE("agrees with the VAR closed route on a rank-1 model") {
        MatrixXd a(2, 2);
        a << 0.3, 0.6, 0.1, 0.2;  // rank 1
        std::mt19937_64 gen(2);
        const Var1Model m = make_var1(a, testutil::std_spd(gen, 2, 0.5, 1.5));
        const StationaryCovariances cov = stationary_covariances(m);
        const double general = phi2_general(cov);
        const double closed = phi2_var1_closed(m.A, cov.gamma);
        CHECK(std::abs(general - closed) <= 1e-8 * (1.0 + closed));
    }
}

TEST_CASE("phi2_var1_closed") {
    SUBCASE("zero transition") {
        CHECK(phi2_var1_closed(MatrixXd::Zero(2, 2), MatrixXd::Identity(2, 2)) == 0.0);
    }
    SUBCASE("scalar value") {
        const Var1Model m = scalar_ar(0.6);
        const MatrixXd gamma = solve_stationary_var1(m);
        CHECK(phi2_var1_closed(m.A, gamma) == doctest::Approx(0.5625).epsilon(1e-12));
    }
    SUBCASE("dual route on a certified model") {
        const Var1Model m = random_var1(10, 2, 0.5, 0.1, 10.0, 42);
        const StationaryCovariances cov = stationary_covariances(m);
        const double closed = phi2_var1_closed(m.A, cov.gamma);
        CHECK(std::isfinite(closed));
        CHECK(std::abs(phi2_general(cov) - closed) <= 1e-8 * (1.0 + closed));
    }
}

TEST_CASE("phi2_varma_closed") {
    SUBCASE("zero L") {
        std::mt19937_64 gen(3);
        const MatrixXd gamma = testutil::std_spd(gen, 3, 0.5, 2.0);
        CHECK(phi2_varma_closed(MatrixXd::Zero(3, 3), gamma, gamma * 0.5) == 0.0);
    }
    SUBCASE("no factor variance") {
        std::mt19937_64 gen(4);
        const MatrixXd gamma = testutil::std_spd(gen, 3, 0.5, 2.0);
        const MatrixXd l = testutil::std_contraction(gen, 3, 0.5);
        CHECK(phi2_varma_closed(l, gamma, gamma) == 0.0);  // gamma - sigma_xi = 0
    }
    SUBCASE("dual route on a certified model") {
        const Varma11Model m = random_varma11(6, 2, 0.5, 0.1, 15.0, 8);
        const StationaryCovariances cov = stationary_covariances(m);
        const double closed = phi2_varma_closed(m.L, cov.gamma, m.sigma_xi);
        CHECK(std::abs(phi2_general(cov) - closed) <= 1e-8 * (1.0 + closed));
    }
}

TEST_CASE("phi2_from_canonical_corrs") {
    CHECK(phi2_from_canonical_corrs({}) == 0.0);
    CHECK(phi2_from_canonical_corrs({0.0, 0.0}) == 0.0);
    CHECK(phi2_from_canonical_corrs({0.6}) == doctest::Approx(0.5625).epsilon(1e-12));
    CHECK(phi2_from_canonical_corrs({0.5, 0.5}) ==
          doctest::Approx(7.0 / 9.0).epsilon(1e-12));
    CHECK_THROWS_AS(phi2_from_canonical_corrs({1.0}), OutOfRange);
    CHECK_THROWS_AS(phi2_from_canonical_corrs({-0.1}), OutOfRange);
}

TEST_CASE("analytic bounds") {
    SUBCASE("VAR bound values") {
        CHECK(phi2_bound_var1(0, 1.0, 2.0) == 0.0);
        CHECK(phi2_bound_var1(1, 1.0, 2.0) == doctest::Approx(1.0));
        CHECK(phi2_bound_var1(3, 0.5, 2.0) == doctest::Approx(63.0));
        CHECK_THROWS_AS(phi2_bound_var1(1, 2.0, 1.0), OutOfRange);
    }
    SUBCASE("VARMA bound values") {
        CHECK(phi2_bound_varma(1, 1.0, 2.0, 0.0) == doctest::Approx(phi2_bound_var1(1, 1.0, 2.0)));
        CHECK(phi2_bound_varma(1, 1.0, 2.0, 0.5) == doctest::Approx(7.0));
        CHECK(phi2_bound_varma(2, 0.1, 1.0, 0.5) == doctest::Approx(1599.0));
        CHECK_THROWS_AS(phi2_bound_varma(1, 1.0, 2.0, 1.0), OutOfRange);
        CHECK_THROWS_AS(phi2_bound_varma(1, 1.0, 0.2, 0.5), OutOfRange);
    }
}

TEST_CASE("route equivalence and bound soundness across certified models") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const int p = 2 + static_cast<int>(seed % 4) * 12;  // 2, 14, 26, 38
        const int k = static_cast<int>(seed % 3);           // 0, 1, 2
        if (k > p) continue;
        const Var1Model m = random_var1(p, k, 0.3 + 0.05 * static_cast<double>(seed % 5),
                                        0.1, 10.0, seed);
        const StationaryCovariances cov = stationary_covariances(m);
        const Phi2Report report = phi2_report(m, cov, 0.1, 10.0);
        CHECK(std::abs(report.phi2_general - report.phi2_closed) <=
              1e-8 * (1.0 + report.phi2_closed));
        CHECK(std::abs(phi2_from_canonical_corrs(report.canonical_corrs) -
                       report.phi2_closed) <= 1e-8 * (1.0 + report.phi2_closed));
        if (k == 0)
            CHECK(report.phi2_closed == report.bound);  // both exactly zero
        else
            CHECK(report.phi2_closed < report.bound);
        CHECK(std::exp(report.log1p_phi2) - 1.0 ==
              doctest::Approx(report.phi2_closed).epsilon(1e-10));
        CHECK_FALSE(report.paper_bound_note.empty());
    }
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const Varma11Model m =
            random_varma11(7 + static_cast<int>(seed), 1 + static_cast<int>(seed % 3), 0.5,
                           0.1, 15.0, seed);
        const StationaryCovariances cov = stationary_covariances(m);
        const Phi2Report report = phi2_report(m, cov, 0.1, 15.0, 0.5);
        CHECK(std::abs(report.phi2_general - report.phi2_closed) <=
              1e-8 * (1.0 + report.phi2_closed));
        CHECK(std::abs(phi2_from_canonical_corrs(report.canonical_corrs) -
                       report.phi2_closed) <= 1e-8 * (1.0 + report.phi2_closed));
        CHECK(report.phi2_closed < report.bound);
    }
}

TEST_CASE("determinant identity |2I - S| = |S| for S = sigma_tilde^{-1} sigma") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const int p = 3 + static_cast<int>(seed) * 5;  // up to 28
        const Var1Model m = random_var1(p, std::min(p, 2), 0.6, 0.1, 10.0, seed + 100);
        const StationaryCovariances cov = stationary_covariances(m);
        const MatrixXd s = cov.sigma2p_tilde.llt().solve(cov.sigma2p);
        const MatrixXd two_i_minus_s = 2.0 * MatrixXd::Identity(2 * p, 2 * p) - s;
        const double log_s = Eigen::HouseholderQR<MatrixXd>(s).logAbsDeterminant();
        const double log_two = Eigen::HouseholderQR<MatrixXd>(two_i_minus_s).logAbsDeterminant();
        CHECK(std::abs(log_s - log_two) <= 1e-8 * (1.0 + std::abs(log_s)));
    }
}

TEST_CASE("scalar monotonicity of phi2 in |a|") {
    double prev = -1.0;
    for (double a : {0.05, 0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 0.9}) {
        const Var1Model m = scalar_ar(a);
        const double phi2 = phi2_var1_closed(m.A, solve_stationary_var1(m));
        CHECK(phi2 > prev);
        prev = phi2;
    }
    SUBCASE("shrinking a does not raise the canonical correlation") {
        const Var1Model big = scalar_ar(0.7);
        const Var1Model small = scalar_ar(0.7 * 0.5);
        const StationaryCovariances cov_big = stationary_covariances(big);
        const StationaryCovariances cov_small = stationary_covariances(small);
        const Phi2Report rb = phi2_report(big, cov_big, 0.1, 10.0);
        const Phi2Report rs = phi2_report(small, cov_small, 0.1, 10.0);
        CHECK(rs.canonical_corrs[0] <= rb.canonical_corrs[0]);
    }
}
