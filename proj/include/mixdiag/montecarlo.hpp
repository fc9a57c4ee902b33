#ifndef MIXDIAG_MONTECARLO_HPP
#define MIXDIAG_MONTECARLO_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mixdiag/mixing.hpp"
#include "mixdiag/phi2.hpp"

namespace mixdiag {

struct InitMode {
    enum class Kind { exact_stationary, burn_in };
    Kind kind = Kind::exact_stationary;
    int burn_in_steps = 1000;

    static InitMode stationary() { return {}; }
    static InitMode burnin(int m) { return {Kind::burn_in, m}; }
};

/// One simulated fragment X(1..T); bit-identical for identical
/// (seed, model, T, init).
struct SimulationRun {
    std::uint64_t seed = 0;
    int T = 0;
    int p = 0;
    MatrixXd path;  ///< T x p, row t-1 holds X(t)
    InitMode init;
};

/// Moment estimates from one fragment. gamma_hat / gamma1_hat / se_gamma are
/// filled by empirical_covariances; the plug-in steps fill the rest.
struct EmpiricalEstimates {
    MatrixXd gamma_hat;
    MatrixXd gamma1_hat;
    double rho1_hat = 0.0;
    double phi2_hat = 0.0;
    double se_rho1 = 0.0;   ///< rough normal-approximation scale for rho1_hat
    double se_gamma = 0.0;  ///< rough sampling scale of gamma_hat
};

/// Simulates the generative recursion with innovations from a counter-based
/// stream keyed by seed. VARMA paths are simulated in factor form:
/// F(t) = H F(t-1) + eta(t), X(t) = Lambda F(t) + xi(t). gamma is the
/// stationary covariance, used for the exact-stationary start.
SimulationRun simulate(const Var1Model& model, const MatrixXd& gamma, int T,
                       std::uint64_t seed, InitMode init = {});
SimulationRun simulate(const Varma11Model& model, const MatrixXd& gamma, int T,
                       std::uint64_t seed, InitMode init = {});

/// Centered moment estimators of gamma and gamma(1). Requires T >= p + 2.
EmpiricalEstimates empirical_covariances(const SimulationRun& run);

/// Top sample canonical correlation from (gamma_hat, gamma1_hat), after a
/// ridge of 1e-8 * trace(gamma_hat)/p on the diagonal.
double empirical_rho1_plugin(const EmpiricalEstimates& estimates);

/// Quantile-binned contingency estimate of phi^2 between two scalar series:
/// chi-square statistic of the bins x bins table divided by the sample count.
/// Bin membership depends only on ranks, so strictly increasing marginal
/// transforms leave the value bit-identical.
double empirical_phi2_contingency(const std::vector<double>& x,
                                  const std::vector<double>& y, int bins);

/// True iff the binned phi^2 is bit-identical after mapping both series
/// through the given transform (exact for strictly increasing maps).
bool marginal_invariance_check(const std::vector<double>& x, const std::vector<double>& y,
                               const std::function<double(double)>& transform, int bins);

enum class ModelKind { var1, varma11 };

struct SweepTargets {
    int k = 1;
    double delta = 0.1;
    double zeta = 10.0;
    double mu = 0.5;
};

struct SweepConfig {
    DimensionSchedule schedule;
    std::vector<int> Ts;             ///< sample lengths to visit, each <= t_max
    SweepTargets targets;
    ModelKind kind = ModelKind::var1;
    std::vector<std::uint64_t> seeds = {0};
    int n_max = 20;
    bool with_empirical = false;
    int bins = 10;                   ///< contingency bins for phi2_hat
};

struct SweepRow {
    int T = 0;
    int p = 0;
    int k = 0;
    std::uint64_t seed = 0;
    double phi2_closed = 0.0;
    double phi2_general = 0.0;
    double phi2_bound = 0.0;
    std::vector<double> rho;
    double fit_A = 0.0;
    double fit_gamma = 0.0;
    std::optional<double> rho1_hat;
    std::optional<double> phi2_hat;
};

/// One row per (T, seed), ordered by T then seed: a fresh certified model
/// at dimension p_T, its analytic phi^2 routes, bound, rho table and decay
/// fit, plus plug-in estimates from a length-T fragment when requested and
/// feasible.
std::vector<SweepRow> triangular_array_run(const SweepConfig& config);

/// CSV with header T,p,k,seed,phi2_closed,phi2_general,phi2_bound,
/// rho1..rho{n_max},fit_A,fit_gamma,rho1_hat,phi2_hat. Floats carry 17
/// significant digits; missing empirical fields are blank.
std::string sweep_csv(const std::vector<SweepRow>& rows, int n_max);

/// 17-significant-digit formatting (round-trips doubles exactly), shared
/// by every CSV and report writer.
std::string format_g17(double value);

} // namespace mixdiag

#endif
