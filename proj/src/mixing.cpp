#include "mixdiag/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixdiag/errors.hpp"

namespace mixdiag {

namespace {

constexpr double kSubmultTol = 1e-10;

template <class Model>
MixingReport report_impl(const Model& model, const MatrixXd& gamma, int n_max) {
    if (n_max < 1) throw OutOfRange("mixing_report: n_max must be positive");
    MixingReport report;
    report.rho.reserve(n_max);
    for (int n = 1; n <= n_max; ++n)
        report.rho.push_back(rho_n(model, gamma, n));
    const auto positives =
        std::count_if(report.rho.begin(), report.rho.end(), [](double r) { return r > 0.0; });
    if (positives >= 2) {
        const DecayFit fit = decay_fit(report.rho);
        report.fitted_A = fit.A;
        report.fitted_gamma = fit.gamma;
    } else {
        // Independent or near-independent chain: flat envelope at the peak.
        report.fitted_gamma = 0.0;
        report.fitted_A = *std::max_element(report.rho.begin(), report.rho.end());
    }
    report.N = 1;
    while (report.N < n_max && !(report.rho[report.N - 1] < 1.0)) ++report.N;
    report.kappa = report.rho[report.N - 1];
    return report;
}

} // namespace

std::vector<double> canonical_correlations(const MatrixXd& gamma, const MatrixXd& cross) {
    if (gamma.rows() != gamma.cols() || cross.rows() != gamma.rows() ||
        cross.cols() != gamma.cols())
        throw DimensionMismatch("canonical_correlations: gamma and cross must be p x p");
    require_spd(gamma, "canonical_correlations: gamma");

    const MatrixXd gis = sym_inv_sqrt(gamma);
    Eigen::JacobiSVD<MatrixXd> svd(gis * cross * gis);
    std::vector<double> r(svd.singularValues().size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double s = svd.singularValues()(static_cast<Eigen::Index>(i));
        if (s > 1.0 + 1e-10)
            throw OutOfRange("canonical_correlations: singular value " + std::to_string(s) +
                             " exceeds 1 (cross is not consistent with gamma)");
        r[i] = std::clamp(s, 0.0, 1.0);
    }
    return r;
}

double rho_n(const Var1Model& model, const MatrixXd& gamma, int n) {
    const auto r = canonical_correlations(gamma, lag_cross_cov(model, gamma, n));
    return r.empty() ? 0.0 : r.front();
}

double rho_n(const Varma11Model& model, const MatrixXd& gamma, int n) {
    const auto r = canonical_correlations(gamma, lag_cross_cov(model, gamma, n));
    return r.empty() ? 0.0 : r.front();
}

SubmultCheck submultiplicativity_check(const std::vector<double>& rho, int N) {
    if (N < 1) throw OutOfRange("submultiplicativity_check: N must be positive");
    if (static_cast<std::size_t>(N) > rho.size())
        throw OutOfRange("submultiplicativity_check: rho table shorter than N");
    SubmultCheck check;
    const double base = rho[N - 1];
    double power = base;
    for (int m = 2; static_cast<std::size_t>(m) * N <= rho.size(); ++m) {
        power *= base;
        check.worst_violation =
            std::max(check.worst_violation, rho[static_cast<std::size_t>(m) * N - 1] - power);
    }
    check.worst_violation = std::max(check.worst_violation, 0.0);
    check.passed = check.worst_violation <= kSubmultTol;
    return check;
}

DecayFit decay_fit(const std::vector<double>& rho) {
    // Fit log rho(n) = alpha - gamma * n over the positive entries.
    double sn = 0.0, sl = 0.0, snn = 0.0, snl = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (!(rho[i] > 0.0)) continue;
        const double n = static_cast<double>(i + 1);
        const double l = std::log(rho[i]);
        sn += n;
        sl += l;
        snn += n * n;
        snl += n * l;
        ++count;
    }
    if (count < 2)
        throw DegenerateInput("decay_fit: need at least two positive rho values");

    const double denom = count * snn - sn * sn;
    const double slope = (count * snl - sn * sl) / denom;

    DecayFit fit;
    fit.gamma = -slope;
    fit.A = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i)
        fit.A = std::max(fit.A, rho[i] * std::exp(fit.gamma * static_cast<double>(i + 1)));
    // Bump A by ulps until the envelope dominates in floating point as well,
    // so rho(n) <= A * exp(-gamma n) is assertable exactly.
    for (bool dominated = false; !dominated;) {
        dominated = true;
        for (std::size_t i = 0; i < rho.size(); ++i) {
            if (rho[i] > fit.A * std::exp(-fit.gamma * static_cast<double>(i + 1))) {
                fit.A *= 1.0 + 4e-16;
                dominated = false;
                break;
            }
        }
    }
    return fit;
}

DecayFit expodecay_lift(const std::vector<double>& a, int M, double c, double C) {
    if (M < 1) throw OutOfRange("expodecay_lift: M must be positive");
    if (!(c > 0.0 && c < 1.0)) throw OutOfRange("expodecay_lift: c must lie in (0, 1)");
    if (!(C > 0.0)) throw OutOfRange("expodecay_lift: C must be positive");

    for (std::size_t i = 1; i < a.size(); ++i)
        if (a[i] > a[i - 1])
            throw NotMonotone("expodecay_lift: sequence increases at n = " +
                              std::to_string(i + 1));

    double geometric = C;
    for (int n = 1; static_cast<std::size_t>(n) * M <= a.size(); ++n) {
        geometric *= c;
        if (a[static_cast<std::size_t>(n) * M - 1] > geometric)
            throw PremiseViolated("expodecay_lift: a(" + std::to_string(n * M) +
                                  ") exceeds C*c^" + std::to_string(n));
    }

    DecayFit fit;
    fit.gamma = -std::log(c) / M;
    fit.A = C / c;
    // Monotonicity guarantees coverage from lag M on; the head is only
    // constrained indirectly, so the stated postcondition is verified.
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double envelope = fit.A * std::exp(-fit.gamma * static_cast<double>(i + 1));
        if (a[i] > envelope)
            throw PremiseViolated("expodecay_lift: a(" + std::to_string(i + 1) +
                                  ") = " + std::to_string(a[i]) +
                                  " exceeds the constructed envelope " +
                                  std::to_string(envelope));
    }
    return fit;
}

MixingReport mixing_report(const Var1Model& model, const MatrixXd& gamma, int n_max) {
    return report_impl(model, gamma, n_max);
}

MixingReport mixing_report(const Varma11Model& model, const MatrixXd& gamma, int n_max) {
    return report_impl(model, gamma, n_max);
}

} // namespace mixdiag
