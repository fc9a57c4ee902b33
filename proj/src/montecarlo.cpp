#include "mixdiag/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <string>

#include "mixdiag/errors.hpp"
#include "mixdiag/rng.hpp"

namespace mixdiag {

namespace {

VectorXd gaussian_vector(CounterRng& rng, int n) {
    VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.gaussian();
    return v;
}

/// Equal-count bin index per element, assigned by rank with ties broken by
/// position (stable), so the assignment is invariant under strictly
/// increasing transforms.
std::vector<int> quantile_bins(const std::vector<double>& x, int bins) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&x](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<int> bin(n);
    for (std::size_t rank = 0; rank < n; ++rank)
        bin[order[rank]] = static_cast<int>(rank * static_cast<std::size_t>(bins) / n);
    return bin;
}

} // namespace

SimulationRun simulate(const Var1Model& model, const MatrixXd& gamma, int T,
                       std::uint64_t seed, InitMode init) {
    if (T < 1) throw OutOfRange("simulate: T must be positive");
    if (gamma.rows() != model.p || gamma.cols() != model.p)
        throw DimensionMismatch("simulate: gamma has wrong size");

    CounterRng rng(seed);
    const MatrixXd noise_factor = sym_sqrt(model.sigma_xi);

    VectorXd x;
    if (init.kind == InitMode::Kind::exact_stationary) {
        x = sym_sqrt(gamma) * gaussian_vector(rng, model.p);
    } else {
        x = VectorXd::Zero(model.p);
        for (int t = 0; t < init.burn_in_steps; ++t)
            x = model.A * x + noise_factor * gaussian_vector(rng, model.p);
    }

    SimulationRun run{seed, T, model.p, MatrixXd(T, model.p), init};
    for (int t = 0; t < T; ++t) {
        x = model.A * x + noise_factor * gaussian_vector(rng, model.p);
        run.path.row(t) = x.transpose();
    }
    return run;
}

SimulationRun simulate(const Varma11Model& model, const MatrixXd& gamma, int T,
                       std::uint64_t seed, InitMode init) {
    if (T < 1) throw OutOfRange("simulate: T must be positive");
    if (gamma.rows() != model.p || gamma.cols() != model.p)
        throw DimensionMismatch("simulate: gamma has wrong size");

    CounterRng rng(seed);
    const MatrixXd eta_factor = sym_sqrt(model.sigma_eta);
    const MatrixXd xi_factor = sym_sqrt(model.sigma_xi);

    VectorXd f;
    if (init.kind == InitMode::Kind::exact_stationary) {
        f = sym_sqrt(solve_stationary_factor(model)) * gaussian_vector(rng, model.k);
    } else {
        f = VectorXd::Zero(model.k);
        for (int t = 0; t < init.burn_in_steps; ++t)
            f = model.H * f + eta_factor * gaussian_vector(rng, model.k);
    }

    SimulationRun run{seed, T, model.p, MatrixXd(T, model.p), init};
    for (int t = 0; t < T; ++t) {
        f = model.H * f + eta_factor * gaussian_vector(rng, model.k);
        run.path.row(t) =
            (model.Lambda * f + xi_factor * gaussian_vector(rng, model.p)).transpose();
    }
    return run;
}

EmpiricalEstimates empirical_covariances(const SimulationRun& run) {
    const int T = run.T;
    const int p = run.p;
    if (T < p + 2)
        throw InsufficientData("empirical_covariances: need T >= p + 2, got T = " +
                               std::to_string(T));

    const Eigen::RowVectorXd mean = run.path.colwise().mean();
    const MatrixXd centered = run.path.rowwise() - mean;

    EmpiricalEstimates est;
    est.gamma_hat = symmetrize(centered.transpose() * centered / static_cast<double>(T));
    est.gamma1_hat = centered.bottomRows(T - 1).transpose() * centered.topRows(T - 1) /
                     static_cast<double>(T);
    est.se_gamma = est.gamma_hat.norm() / std::sqrt(static_cast<double>(T));
    return est;
}

double empirical_rho1_plugin(const EmpiricalEstimates& estimates) {
    const auto p = estimates.gamma_hat.rows();
    const double ridge = 1e-8 * estimates.gamma_hat.trace() / static_cast<double>(p);
    const MatrixXd regularized =
        estimates.gamma_hat + ridge * MatrixXd::Identity(p, p);
    const auto r = canonical_correlations(regularized, estimates.gamma1_hat);
    return r.empty() ? 0.0 : r.front();
}

double empirical_phi2_contingency(const std::vector<double>& x,
                                  const std::vector<double>& y, int bins) {
    if (bins < 2) throw OutOfRange("empirical_phi2_contingency: need at least 2 bins");
    if (x.size() != y.size())
        throw DimensionMismatch("empirical_phi2_contingency: series lengths differ");
    const std::size_t n = x.size();
    if (n < 10 * static_cast<std::size_t>(bins) * static_cast<std::size_t>(bins))
        throw InsufficientData("empirical_phi2_contingency: need at least 10*bins^2 samples");

    const auto distinct = [bins](const std::vector<double>& v) {
        std::set<double> values(v.begin(), v.end());
        return values.size() >= static_cast<std::size_t>(bins);
    };
    if (!distinct(x) || !distinct(y))
        throw DegenerateBins("empirical_phi2_contingency: fewer distinct values than bins");

    const auto bx = quantile_bins(x, bins);
    const auto by = quantile_bins(y, bins);

    MatrixXd table = MatrixXd::Zero(bins, bins);
    for (std::size_t i = 0; i < n; ++i) table(bx[i], by[i]) += 1.0;

    const VectorXd row = table.rowwise().sum();
    const VectorXd col = table.colwise().sum();
    const double total = static_cast<double>(n);

    double chi2 = 0.0;
    for (int i = 0; i < bins; ++i) {
        for (int j = 0; j < bins; ++j) {
            const double expected = row(i) * col(j) / total;
            const double diff = table(i, j) - expected;
            chi2 += diff * diff / expected;
        }
    }
    return chi2 / total;
}

bool marginal_invariance_check(const std::vector<double>& x, const std::vector<double>& y,
                               const std::function<double(double)>& transform, int bins) {
    std::vector<double> tx(x.size()), ty(y.size());
    std::transform(x.begin(), x.end(), tx.begin(), transform);
    std::transform(y.begin(), y.end(), ty.begin(), transform);
    return empirical_phi2_contingency(x, y, bins) ==
           empirical_phi2_contingency(tx, ty, bins);
}

std::vector<SweepRow> triangular_array_run(const SweepConfig& config) {
    if (config.Ts.empty()) throw OutOfRange("triangular_array_run: empty T list");
    if (config.seeds.empty()) throw OutOfRange("triangular_array_run: empty seed list");

    std::vector<int> Ts = config.Ts;
    std::sort(Ts.begin(), Ts.end());
    std::vector<std::uint64_t> seeds = config.seeds;
    std::sort(seeds.begin(), seeds.end());

    std::vector<SweepRow> rows;
    rows.reserve(Ts.size() * seeds.size());
    for (int T : Ts) {
        const int p = dimension_schedule(config.schedule, T);
        for (std::uint64_t seed : seeds) {
            SweepRow row;
            row.T = T;
            row.p = p;
            row.k = config.targets.k;
            row.seed = seed;

            StationaryCovariances cov;
            Phi2Report phi2;
            SimulationRun run;
            if (config.kind == ModelKind::var1) {
                const Var1Model model =
                    random_var1(p, config.targets.k, config.targets.mu, config.targets.delta,
                                config.targets.zeta, seed);
                cov = stationary_covariances(model);
                phi2 = phi2_report(model, cov, config.targets.delta, config.targets.zeta);
                const MixingReport mix = mixing_report(model, cov.gamma, config.n_max);
                row.rho = mix.rho;
                row.fit_A = mix.fitted_A;
                row.fit_gamma = mix.fitted_gamma;
                if (config.with_empirical && T >= p + 2)
                    run = simulate(model, cov.gamma, T, seed + 1);
            } else {
                const Varma11Model model =
                    random_varma11(p, config.targets.k, config.targets.mu,
                                   config.targets.delta, config.targets.zeta, seed);
                cov = stationary_covariances(model);
                phi2 = phi2_report(model, cov, config.targets.delta, config.targets.zeta,
                                   config.targets.mu);
                const MixingReport mix = mixing_report(model, cov.gamma, config.n_max);
                row.rho = mix.rho;
                row.fit_A = mix.fitted_A;
                row.fit_gamma = mix.fitted_gamma;
                if (config.with_empirical && T >= p + 2)
                    run = simulate(model, cov.gamma, T, seed + 1);
            }
            row.phi2_closed = phi2.phi2_closed;
            row.phi2_general = phi2.phi2_general;
            row.phi2_bound = phi2.bound;

            if (run.T > 0) {
                EmpiricalEstimates est = empirical_covariances(run);
                est.rho1_hat = empirical_rho1_plugin(est);
                est.se_rho1 = (1.0 - est.rho1_hat * est.rho1_hat) /
                              std::sqrt(static_cast<double>(run.T));
                const std::size_t needed =
                    10 * static_cast<std::size_t>(config.bins) * config.bins;
                if (static_cast<std::size_t>(run.T) > needed) {
                    std::vector<double> x0(run.T - 1), y0(run.T - 1);
                    for (int t = 0; t + 1 < run.T; ++t) {
                        x0[t] = run.path(t, 0);
                        y0[t] = run.path(t + 1, 0);
                    }
                    est.phi2_hat = empirical_phi2_contingency(x0, y0, config.bins);
                    row.phi2_hat = est.phi2_hat;
                }
                row.rho1_hat = est.rho1_hat;
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string format_g17(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, int n_max) {
    std::string csv = "T,p,k,seed,phi2_closed,phi2_general,phi2_bound";
    for (int n = 1; n <= n_max; ++n) csv += ",rho" + std::to_string(n);
    csv += ",fit_A,fit_gamma,rho1_hat,phi2_hat\n";

    for (const SweepRow& row : rows) {
        csv += std::to_string(row.T) + ',' + std::to_string(row.p) + ',' +
               std::to_string(row.k) + ',' + std::to_string(row.seed) + ',' +
               format_g17(row.phi2_closed) + ',' + format_g17(row.phi2_general) + ',' +
               format_g17(row.phi2_bound);
        for (int n = 0; n < n_max; ++n) {
            csv += ',';
            if (n < static_cast<int>(row.rho.size())) csv += format_g17(row.rho[n]);
        }
        csv += ',' + format_g17(row.fit_A) + ',' + format_g17(row.fit_gamma) + ',';
        if (row.rho1_hat) csv += format_g17(*row.rho1_hat);
        csv += ',';
        if (row.phi2_hat) csv += format_g17(*row.phi2_hat);
        csv += '\n';
    }
    return csv;
}

} // namespace mixdiag
