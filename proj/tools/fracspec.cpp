#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracspec/cauchy_solver.hpp"
#include "fracspec/dd_resolvent.hpp"
#include "fracspec/errors.hpp"
#include "fracspec/operator_spectrum.hpp"
#include "fracspec/signal_io.hpp"
#include "fracspec/special_fn.hpp"
#include "fracspec/stability_lab.hpp"

using namespace fracspec;

namespace {

int cmd_solve(const std::string& config, const std::string& out) {
    const Scenario s = load_scenario(config);
    const SolveOutcome r = solve_with_residual(s);
    write_signal_csv(out, r.u);
    std::cerr << "route " << r.route << ", mild residual " << r.residual << '\n';
    return 0;
}

int cmd_spectrum(const std::string& config) {
    const Scenario s = load_scenario(config);
    std::cout << "xi,reason\n" << std::setprecision(17);
    for (const BoundaryPoint& p : sigma_set(s.A, s.alpha).points) {
        std::cout << p.xi << ',' << to_string(p.reason) << '\n';
    }
    return 0;
}

int cmd_scan(const std::string& signal, int degree, double xi_min, double xi_max, std::size_t steps) {
    if (steps < 1 || !(xi_max > xi_min)) {
        throw DomainError("scan needs --xi-max > --xi-min and --xi-steps >= 1");
    }
    const SampledSignal f = read_signal_csv(signal, degree);
    std::vector<double> grid;
    for (std::size_t k = 0; k <= steps; ++k) {
        grid.push_back(xi_min + (xi_max - xi_min) * static_cast<double>(k) / static_cast<double>(steps));
    }
    const std::vector<double> etas = laplace_admissible_etas(f, degree, default_eta_sequence());
    std::cout << "xi,order,fit_slope\n" << std::setprecision(17);
    for (const ScanPoint& p : singularity_scan(f, degree, grid, etas)) {
        std::cout << p.xi << ',' << p.order << ',' << p.fit_slope << '\n';
    }
    return 0;
}

void print_diagnostic(const ErgodicDiagnostic& d) {
    std::cout << "eta,scaled_norm\n" << std::setprecision(17);
    for (std::size_t k = 0; k < d.eta_values.size(); ++k) {
        std::cout << d.eta_values[k] << ',' << d.scaled_norms[k] << '\n';
    }
    std::cout << "# limit=" << d.extrapolated_limit << " converged=" << d.converged
              << " divergent=" << d.divergent << '\n';
}

int cmd_ergodic(const std::string& signal, const std::string& config, int degree, double zeta) {
    if (!signal.empty()) {
        const SampledSignal f = read_signal_csv(signal, degree);
        const std::vector<double> etas = admissible_etas(f, degree, default_eta_sequence());
        if (etas.empty()) {
            throw TruncationError("no eta in the default sequence is admissible on this grid");
        }
        print_diagnostic(ergodic_mean_signal(f, degree, zeta, etas).diagnostic);
        return 0;
    }
    const Scenario s = load_scenario(config);
    const std::vector<double> etas = default_eta_sequence();
    print_diagnostic(ergodic_mean_operator(s.A, s.alpha, zeta, s.x0, etas).diagnostic);
    return 0;
}

int cmd_verify(const std::vector<std::string>& configs, const std::string& out) {
    if (configs.size() == 1) {
        const int code = run_scenario(configs.front(), out, std::cerr);
        if (code != 1) std::cout << configs.front() << " -> " << out << " (exit " << code << ")\n";
        return code;
    }
    std::vector<BatchJob> jobs;
    for (const std::string& c : configs) {
        jobs.push_back({c, (std::filesystem::path(out) / std::filesystem::path(c).stem()).string()});
    }
    const std::vector<int> codes = run_batch(jobs, std::cerr);
    int worst = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        std::cout << jobs[i].config_path << " -> " << jobs[i].out_dir << " (exit " << codes[i] << ")\n";
        if (codes[i] == 1) worst = 1;
        if (codes[i] == 2 && worst == 0) worst = 2;
    }
    return worst;
}

int cmd_ml(double alpha, double beta, double re, double im) {
    const cplx v = mittag_leffler(alpha, beta, cplx{re, im});
    std::cout << std::setprecision(17) << v.real() << ',' << v.imag() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracspec: spectral stability lab for fractional evolution equations"};
    app.require_subcommand(1);

    std::string config, out, signal;
    std::vector<std::string> configs;
    int degree = 0;
    double xi_min = -3.0, xi_max = 3.0, zeta = 0.0;
    std::size_t xi_steps = 60;
    double alpha = 0.5, beta = 1.0, re = 0.0, im = 0.0;

    auto* solve = app.add_subcommand("solve", "solve a scenario and write u.csv");
    solve->add_option("--config", config, "scenario file")->required();
    solve->add_option("--out", out, "output CSV")->required();

    auto* spectrum = app.add_subcommand("spectrum", "print the boundary spectrum as xi,reason");
    spectrum->add_option("--config", config, "scenario file")->required();

    auto* scan = app.add_subcommand("scan", "Laplace singularity scan of a sampled signal");
    scan->add_option("--signal", signal, "signal CSV")->required();
    scan->add_option("--degree", degree, "weight degree n")->check(CLI::NonNegativeNumber);
    scan->add_option("--xi-min", xi_min);
    scan->add_option("--xi-max", xi_max);
    scan->add_option("--xi-steps", xi_steps)->check(CLI::PositiveNumber);

    auto* ergodic = app.add_subcommand("ergodic", "eta-scaled resolvent norms at i*zeta");
    auto* erg_signal = ergodic->add_option("--signal", signal, "signal CSV (signal-level mean)");
    auto* erg_config = ergodic->add_option("--config", config, "scenario file (operator-level mean on x0)");
    erg_signal->excludes(erg_config);
    ergodic->add_option("--degree", degree, "weight degree n")->check(CLI::NonNegativeNumber);
    ergodic->add_option("--zeta", zeta);

    auto* verify = app.add_subcommand("verify", "run scenarios through the stability checks");
    verify->add_option("--config", configs, "scenario file(s)")->required();
    verify->add_option("--out", out, "output directory")->required();

    auto* ml = app.add_subcommand("ml", "evaluate E_{alpha,beta}(re + i im)");
    ml->add_option("--alpha", alpha)->required();
    ml->add_option("--beta", beta);
    ml->add_option("--re", re)->required();
    ml->add_option("--im", im);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve->parsed()) return cmd_solve(config, out);
        if (spectrum->parsed()) return cmd_spectrum(config);
        if (scan->parsed()) return cmd_scan(signal, degree, xi_min, xi_max, xi_steps);
        if (ergodic->parsed()) {
            if (signal.empty() && config.empty()) {
                std::cerr << "error: ergodic needs --signal or --config\n";
                return 1;
            }
            return cmd_ergodic(signal, config, degree, zeta);
        }
        if (verify->parsed()) return cmd_verify(configs, out);
        if (ml->parsed()) return cmd_ml(alpha, beta, re, im);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
