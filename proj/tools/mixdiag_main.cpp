#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mixdiag/errors.hpp"
#include "mixdiag/lemmas.hpp"
#include "mixdiag/mixing.hpp"
#include "mixdiag/model_io.hpp"
#include "mixdiag/montecarlo.hpp"
#include "mixdiag/phi2.hpp"
#include "mixdiag/stationary.hpp"

namespace {

using namespace mixdiag;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitCrossCheck = 3;
constexpr int kExitInfeasible = 4;

constexpr double kRouteTol = 1e-8;

struct GlobalOptions {
    std::string out;
    std::uint64_t seed = 0;
    bool quiet = false;
    std::string dump_config;
};

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream stream(path, std::ios::binary);
    if (!stream) throw OutOfRange("cannot open output file " + path);
    stream << contents;
}

std::string certificate_path(const std::string& model_path) {
    std::filesystem::path p(model_path);
    p.replace_extension(".cert.json");
    return p.string();
}

DimensionSchedule parse_schedule(const std::string& text, int t_max) {
    std::vector<std::string> parts;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ':')) parts.push_back(item);
    try {
        if (parts.size() == 2 && parts[0] == "linear")
            return DimensionSchedule::linear(std::stod(parts[1]), t_max);
        if (parts.size() == 3 && parts[0] == "power")
            return DimensionSchedule::power(std::stod(parts[1]), std::stod(parts[2]), t_max);
        if (parts.size() == 2 && parts[0] == "fixed")
            return DimensionSchedule::fixed(std::stoi(parts[1]), t_max);
    } catch (const std::logic_error&) {
        throw OutOfRange("schedule: bad number in '" + text + "'");
    }
    throw OutOfRange("schedule: expected linear:<c>, power:<c>:<a> or fixed:<p>, got '" +
                     text + "'");
}

std::string certificate_text_block(const AssumptionCertificate& cert) {
    std::string s;
    s += "certificate: kind=" + std::string(cert.varma ? "varma11" : "var1");
    s += " k_declared=" + std::to_string(cert.k_declared);
    s += " k_measured=" + std::to_string(cert.k_measured) + "\n";
    s += "  lambda_min(sigma_xi) = " + format_g17(cert.lambda_min_sigma_xi) +
         "  (delta = " + format_g17(cert.delta) + ", " +
         (cert.noise_floor_pass ? "pass" : "FAIL") +
         ", margin " + format_g17(cert.noise_floor_margin) + ")\n";
    s += "  lambda_max(gamma)    = " + format_g17(cert.lambda_max_gamma) +
         "  (zeta = " + format_g17(cert.zeta) + ", " +
         (cert.cov_ceiling_pass ? "pass" : "FAIL") +
         ", margin " + format_g17(cert.cov_ceiling_margin) + ")\n";
    s += "  transition norm      = " + format_g17(cert.transition_norm);
    if (cert.varma)
        s += "  (contraction " + std::string(cert.contraction_pass ? "pass" : "FAIL") +
             ", margin " + format_g17(cert.contraction_margin) + ")";
    s += "\n";
    s += "  rank check: " + std::string(cert.rank_pass ? "pass" : "FAIL") + "\n";
    s += std::string("  overall: ") + (cert.passes() ? "pass" : "FAIL") + "\n";
    return s;
}

// ---------------------------------------------------------------- gen

struct GenOptions {
    int p = 10;
    int k = 2;
    double mu = 0.5;
    double delta = 0.1;
    double zeta = 10.0;
    std::string kind = "var1";
};

int run_gen(const GenOptions& opt, const GlobalOptions& global) {
    const std::string out = global.out.empty() ? "model.json" : global.out;

    AnyModel model;
    if (opt.kind == "var1")
        model = random_var1(opt.p, opt.k, opt.mu, opt.delta, opt.zeta, global.seed);
    else
        model = random_varma11(opt.p, opt.k, opt.mu, opt.delta, opt.zeta, global.seed);

    AssumptionCertificate cert;
    if (const auto* var = std::get_if<Var1Model>(&model))
        cert = certify_assumptions(*var, opt.delta, opt.zeta, solve_stationary_var1(*var));
    else
        cert = certify_assumptions(std::get<Varma11Model>(model), opt.delta, opt.zeta,
                                   solve_stationary_varma11(std::get<Varma11Model>(model)));

    save_model(out, model);
    write_file(certificate_path(out), certificate_to_string(cert));

    if (!global.quiet) {
        std::cout << "wrote " << out << " and " << certificate_path(out) << "\n"
                  << certificate_text_block(cert);
    }
    return cert.passes() ? kExitOk : kExitCrossCheck;
}

// ---------------------------------------------------------------- diagnose

struct DiagnoseOptions {
    std::string model_path;
    double delta = -1.0;  // derived from the model when unset
    double zeta = -1.0;
    double mu = -1.0;
    int n_max = 20;
};

int run_diagnose(const DiagnoseOptions& opt, const GlobalOptions& global) {
    const AnyModel any = load_model(opt.model_path);

    StationaryCovariances cov;
    if (const auto* var = std::get_if<Var1Model>(&any))
        cov = stationary_covariances(*var);
    else
        cov = stationary_covariances(std::get<Varma11Model>(any));

    // Default targets bracket the measured constants, so the certificate
    // passes and the bound stays valid; explicit flags override.
    const double lam_min = min_eigenvalue_sym(
        std::visit([](const auto& m) { return m.sigma_xi; }, any));
    const double delta = opt.delta > 0.0 ? opt.delta : 0.5 * lam_min;
    const double zeta =
        opt.zeta > 0.0 ? opt.zeta : 2.0 * max_eigenvalue_sym(cov.gamma);

    AssumptionCertificate cert;
    Phi2Report phi2;
    MixingReport mix;
    bool markov = false;
    if (const auto* var = std::get_if<Var1Model>(&any)) {
        cert = certify_assumptions(*var, delta, zeta, cov.gamma);
        phi2 = phi2_report(*var, cov, delta, zeta);
        mix = mixing_report(*var, cov.gamma, opt.n_max);
        markov = true;
    } else {
        const auto& varma = std::get<Varma11Model>(any);
        const double norm_l = spectral_norm(varma.L);
        const double mu = opt.mu > 0.0 ? opt.mu : 0.5 * (1.0 + norm_l);
        cert = certify_assumptions(varma, delta, zeta, cov.gamma);
        phi2 = phi2_report(varma, cov, delta, zeta, mu);
        mix = mixing_report(varma, cov.gamma, opt.n_max);
    }

    // Internal cross-checks: the two phi2 routes, the canonical-correlation
    // product identity, the fitted envelope, and (Markov models only) the
    // contraction property.
    bool consistent = true;
    std::string checks;
    {
        const double route_gap = std::abs(phi2.phi2_general - phi2.phi2_closed);
        const bool route_ok = route_gap <= kRouteTol * (1.0 + phi2.phi2_closed);
        consistent = consistent && route_ok;
        checks += std::string("  route agreement: ") + (route_ok ? "ok" : "MISMATCH") +
                  " (|general - closed| = " + format_g17(route_gap) + ")\n";

        const double product = phi2_from_canonical_corrs(phi2.canonical_corrs);
        const double product_gap = std::abs(product - phi2.phi2_closed);
        const bool product_ok = product_gap <= kRouteTol * (1.0 + phi2.phi2_closed);
        consistent = consistent && product_ok;
        checks += std::string("  canonical product identity: ") +
                  (product_ok ? "ok" : "MISMATCH") +
                  " (|product - closed| = " + format_g17(product_gap) + ")\n";

        bool envelope_ok = true;
        for (std::size_t i = 0; i < mix.rho.size(); ++i)
            envelope_ok = envelope_ok &&
                          mix.rho[i] <= mix.fitted_A *
                                            std::exp(-mix.fitted_gamma *
                                                     static_cast<double>(i + 1)) +
                                        1e-12;
        consistent = consistent && envelope_ok;
        checks += std::string("  decay envelope: ") + (envelope_ok ? "ok" : "VIOLATED") + "\n";

        const SubmultCheck sub = submultiplicativity_check(mix.rho, 1);
        if (markov) consistent = consistent && sub.passed;
        checks += "  submultiplicativity at N=1: " +
                  std::string(sub.passed ? "ok" : (markov ? "VIOLATED" : "violated")) +
                  (markov ? "" : " (informational: VARMA(1,1) observations are not Markov)") +
                  " (worst slack " + format_g17(sub.worst_violation) + ")\n";
    }

    if (!global.quiet) {
        std::cout << "model: " << (markov ? "var1" : "varma11") << "  p=" << model_dimension(any)
                  << "  k=" << model_rank(any) << "\n"
                  << certificate_text_block(cert);
        std::cout << "phi2_general = " << format_g17(phi2.phi2_general) << "\n"
                  << "phi2_closed  = " << format_g17(phi2.phi2_closed) << "\n"
                  << "log1p(phi2)  = " << format_g17(phi2.log1p_phi2) << "\n"
                  << "phi2_bound   = " << format_g17(phi2.bound)
                  << (phi2.phi2_closed <= phi2.bound ? "  (phi2 <= bound)" : "  (EXCEEDED)")
                  << "\n"
                  << "note: " << phi2.paper_bound_note << "\n";
        std::cout << "canonical correlations (lag 1):";
        for (double r : phi2.canonical_corrs) std::cout << ' ' << format_g17(r);
        std::cout << "\n";
        std::cout << "rho(n) table (n, rho, envelope):\n";
        for (std::size_t i = 0; i < mix.rho.size(); ++i)
            std::cout << "  " << (i + 1) << ' ' << format_g17(mix.rho[i]) << ' '
                      << format_g17(mix.fitted_A *
                                    std::exp(-mix.fitted_gamma * static_cast<double>(i + 1)))
                      << "\n";
        std::cout << "decay fit: A = " << format_g17(mix.fitted_A)
                  << "  gamma = " << format_g17(mix.fitted_gamma)
                  << "  kappa = " << format_g17(mix.kappa) << "  N = " << mix.N << "\n";
        std::cout << "cross-checks:\n" << checks;
        std::cout << (consistent ? "all cross-checks passed\n" : "CROSS-CHECK FAILURE\n");
    }

    if (!global.out.empty()) {
        std::string csv = "n,rho,envelope\n";
        for (std::size_t i = 0; i < mix.rho.size(); ++i) {
            csv += std::to_string(i + 1) + ',' + format_g17(mix.rho[i]) + ',' +
                   format_g17(mix.fitted_A *
                              std::exp(-mix.fitted_gamma * static_cast<double>(i + 1))) +
                   '\n';
        }
        write_file(global.out, csv);
    }
    return consistent ? kExitOk : kExitCrossCheck;
}

// ---------------------------------------------------------------- sweep

struct SweepOptions {
    std::string schedule = "linear:2";
    std::vector<int> Ts;
    int k = 2;
    double delta = 0.1;
    double zeta = 10.0;
    double mu = 0.5;
    std::string kind = "var1";
    std::vector<std::uint64_t> seeds;
    int n_max = 20;
    bool empirical = false;
    int bins = 10;
};

int run_sweep(const SweepOptions& opt, const GlobalOptions& global) {
    if (opt.Ts.empty()) throw OutOfRange("sweep: need at least one --T");
    const std::string out = global.out.empty() ? "sweep.csv" : global.out;

    SweepConfig config;
    const int t_max = *std::max_element(opt.Ts.begin(), opt.Ts.end());
    config.schedule = parse_schedule(opt.schedule, t_max);
    config.Ts = opt.Ts;
    config.targets = {opt.k, opt.delta, opt.zeta, opt.mu};
    config.kind = opt.kind == "var1" ? ModelKind::var1 : ModelKind::varma11;
    config.seeds = opt.seeds.empty() ? std::vector<std::uint64_t>{global.seed} : opt.seeds;
    config.n_max = opt.n_max;
    config.with_empirical = opt.empirical;
    config.bins = opt.bins;

    try {
        const auto rows = triangular_array_run(config);
        write_file(out, sweep_csv(rows, config.n_max));
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(out, ec);  // no partial CSV on failure
        throw;
    }
    if (!global.quiet)
        std::cout << "wrote " << out << " ("
                  << config.Ts.size() * config.seeds.size() << " rows)\n";
    return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
    std::string model_path;
    int T = 1000;
    std::string init = "stationary";
    int burnin_steps = 1000;
};

int run_simulate(const SimulateOptions& opt, const GlobalOptions& global) {
    const AnyModel any = load_model(opt.model_path);
    InitMode init = InitMode::stationary();
    if (opt.init == "burnin")
        init = InitMode::burnin(opt.burnin_steps);
    else if (opt.init != "stationary")
        throw OutOfRange("simulate: --init must be stationary or burnin");

    SimulationRun run;
    if (const auto* var = std::get_if<Var1Model>(&any))
        run = simulate(*var, solve_stationary_var1(*var), opt.T, global.seed, init);
    else {
        const auto& varma = std::get<Varma11Model>(any);
        run = simulate(varma, solve_stationary_varma11(varma), opt.T, global.seed, init);
    }

    std::string csv;
    for (int j = 0; j < run.p; ++j) csv += (j ? "," : "") + ("x" + std::to_string(j + 1));
    csv += '\n';
    for (int t = 0; t < run.T; ++t) {
        for (int j = 0; j < run.p; ++j) {
            if (j) csv += ',';
            csv += format_g17(run.path(t, j));
        }
        csv += '\n';
    }
    const std::string out = global.out.empty() ? "path.csv" : global.out;
    write_file(out, csv);
    if (!global.quiet)
        std::cout << "wrote " << out << " (" << run.T << " x " << run.p << ")\n";
    return kExitOk;
}

// ---------------------------------------------------------------- lemmas-selftest

struct LemmasOptions {
    int instances = 500;
    std::vector<int> sizes = {1, 2, 5, 20};
    double inject_fault = 0.0;
};

void print_witness(const std::pair<MatrixXd, MatrixXd>& witness) {
    const auto print_matrix = [](const char* label, const MatrixXd& m) {
        if (m.size() == 0) return;
        std::cout << "  witness " << label << " (" << m.rows() << "x" << m.cols() << "):\n";
        for (Eigen::Index i = 0; i < m.rows() && i < 8; ++i) {
            std::cout << "   ";
            for (Eigen::Index j = 0; j < m.cols() && j < 8; ++j)
                std::cout << ' ' << format_g17(m(i, j));
            std::cout << "\n";
        }
    };
    print_matrix("input 1", witness.first);
    print_matrix("input 2", witness.second);
}

int run_lemmas_selftest(const LemmasOptions& opt, const GlobalOptions& global) {
    const std::uint64_t seed = global.seed ? global.seed : 12345;
    const auto suites =
        run_lemma_suites(opt.instances, opt.sizes, seed, opt.inject_fault);
    bool all_pass = true;
    std::string lines;
    for (const auto& suite : suites) {
        all_pass = all_pass && suite.passes == suite.instances;
        lines += suite.name + ": instances=" + std::to_string(suite.instances) +
                 " passes=" + std::to_string(suite.passes) +
                 " worst_violation=" + format_g17(suite.worst_violation) + "\n";
    }
    std::cout << lines;
    if (!all_pass && !global.quiet)
        for (const auto& suite : suites)
            if (suite.witness) {
                std::cout << suite.name << " failing instance:\n";
                print_witness(*suite.witness);
            }
    if (!global.out.empty()) write_file(global.out, lines);
    return all_pass ? kExitOk : kExitCrossCheck;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixing diagnostics for high-dimensional Gaussian VAR(1) / VARMA(1,1) models"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key = value run configuration; flags override");

    GlobalOptions global;
    app.add_option("--out", global.out, "output file path");
    app.add_option("--seed", global.seed, "64-bit seed");
    app.add_flag("--quiet", global.quiet, "suppress report text");
    app.add_option("--dump-config", global.dump_config,
                   "write the effective configuration to this path")
        ->configurable(false);

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "generate a certified random model");
    gen_cmd->add_option("--p", gen.p, "dimension")->required();
    gen_cmd->add_option("--k", gen.k, "transition rank / factor count")->required();
    gen_cmd->add_option("--mu", gen.mu, "target transition norm");
    gen_cmd->add_option("--delta", gen.delta, "innovation eigenvalue floor");
    gen_cmd->add_option("--zeta", gen.zeta, "stationary eigenvalue ceiling");
    gen_cmd->add_option("--kind", gen.kind, "var1 | varma11")
        ->check(CLI::IsMember({"var1", "varma11"}));

    DiagnoseOptions diag;
    auto* diag_cmd = app.add_subcommand("diagnose", "full mixing report for a model file");
    diag_cmd->add_option("--model", diag.model_path, "model file")->required();
    diag_cmd->add_option("--delta", diag.delta, "assumption constant delta");
    diag_cmd->add_option("--zeta", diag.zeta, "assumption constant zeta");
    diag_cmd->add_option("--mu", diag.mu, "assumption constant mu (varma11)");
    diag_cmd->add_option("--n-max", diag.n_max, "largest lag in the rho table");

    SweepOptions sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "triangular-array sweep to CSV");
    sweep_cmd->add_option("--schedule", sweep.schedule, "linear:<c> | power:<c>:<a> | fixed:<p>");
    sweep_cmd->add_option("--T", sweep.Ts, "sample lengths (repeatable)")->required();
    sweep_cmd->add_option("--k", sweep.k, "transition rank / factor count");
    sweep_cmd->add_option("--delta", sweep.delta, "innovation eigenvalue floor");
    sweep_cmd->add_option("--zeta", sweep.zeta, "stationary eigenvalue ceiling");
    sweep_cmd->add_option("--mu", sweep.mu, "target transition norm");
    sweep_cmd->add_option("--kind", sweep.kind, "var1 | varma11")
        ->check(CLI::IsMember({"var1", "varma11"}));
    sweep_cmd->add_option("--seeds", sweep.seeds, "seeds (repeatable)");
    sweep_cmd->add_option("--n-max", sweep.n_max, "largest lag in the rho columns");
    sweep_cmd->add_flag("--empirical", sweep.empirical, "add plug-in estimate columns");
    sweep_cmd->add_option("--bins", sweep.bins, "contingency bins for phi2_hat");

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "write a sample path as CSV");
    sim_cmd->add_option("--model", sim.model_path, "model file")->required();
    sim_cmd->add_option("--T", sim.T, "fragment length")->required();
    sim_cmd->add_option("--init", sim.init, "stationary | burnin");
    sim_cmd->add_option("--burnin-steps", sim.burnin_steps, "steps before recording");

    LemmasOptions lem;
    auto* lem_cmd = app.add_subcommand("lemmas-selftest", "randomized matrix-identity suites");
    lem_cmd->add_option("--instances", lem.instances, "instances per lemma");
    lem_cmd->add_option("--sizes", lem.sizes, "matrix sizes cycled through");
    lem_cmd->add_option("--inject-fault", lem.inject_fault,
                        "test hook: bias added to every measured violation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    if (!global.dump_config.empty())
        write_file(global.dump_config, app.config_to_str(false, false));

    try {
        if (gen_cmd->parsed()) return run_gen(gen, global);
        if (diag_cmd->parsed()) return run_diagnose(diag, global);
        if (sweep_cmd->parsed()) return run_sweep(sweep, global);
        if (sim_cmd->parsed()) return run_simulate(sim, global);
        if (lem_cmd->parsed()) return run_lemmas_selftest(lem, global);
    } catch (const InfeasibleTargets& e) {
        std::cerr << "infeasible generation: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const ConsistencyFailure& e) {
        std::cerr << "internal cross-check failure: " << e.what() << "\n";
        return kExitCrossCheck;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return kExitValidation;
}
