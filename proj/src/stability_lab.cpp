#include "fracspec/stability_lab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "fracspec/errors.hpp"
#include "fracspec/signal_io.hpp"

namespace fracspec {

namespace fs = std::filesystem;

std::string_view to_string(ErgodicStatus s) {
    switch (s) {
        case ErgodicStatus::Vanishing: return "vanishing";
        case ErgodicStatus::Nonzero: return "nonzero";
        case ErgodicStatus::Divergent: return "divergent";
        case ErgodicStatus::NotComputable: return "not_computable";
    }
    return "unknown";
}

namespace {

std::string format_xi(double xi) {
    std::ostringstream out;
    out << std::setprecision(6) << xi;
    return out.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

HypothesisReport check_hypotheses(const Scenario& scenario, const SampledSignal& u) {
    const int n = scenario.degree;
    const double tol = scenario.tol.ergodic;
    HypothesisReport report;
    report.boundary_spectrum = sigma_set(scenario.A, scenario.alpha);
    report.countable = true;
    if (report.boundary_spectrum.points.size() > static_cast<std::size_t>(scenario.A.dimension()) + 1) {
        report.warnings.push_back("boundary spectrum larger than dimension + 1");
    }

    const SampledSignal f = scenario.forcing_signal();
    report.forcing_in_C0n = decay_profile(f, n, DecayOptions{5, scenario.tol.decay, 0.5}).verdict;

    const std::vector<double> etas = default_eta_sequence();
    const std::vector<double> signal_etas = admissible_etas(u, n, etas);
    for (const BoundaryPoint& p : report.boundary_spectrum.points) {
        ErgodicEntry entry;
        entry.point = p;
        if (!signal_etas.empty()) {
            entry.signal = ergodic_mean_signal(u, n, p.xi, signal_etas).diagnostic;
        }
        entry.operator_above =
            ergodic_mean_operator(scenario.A, scenario.alpha, p.xi, scenario.x0, etas, ApproachSide::Above)
                .diagnostic;
        try {
            entry.operator_below =
                ergodic_mean_operator(scenario.A, scenario.alpha, p.xi, scenario.x0, etas, ApproachSide::Below)
                    .diagnostic;
        } catch (const BranchCutViolation&) {
            entry.below_note = "approach from below crosses the branch cut";
        } catch (const SingularMatrix&) {
            entry.below_note = "approach from below meets an eigenvalue";
        }

        if (!entry.signal) {
            entry.status = ErgodicStatus::NotComputable;
        } else if (entry.signal->divergent || entry.operator_above.divergent) {
            entry.status = ErgodicStatus::Divergent;
        } else if (entry.signal->extrapolated_limit >= tol || entry.operator_above.extrapolated_limit >= tol) {
            entry.status = ErgodicStatus::Nonzero;
        } else {
            entry.status = ErgodicStatus::Vanishing;
        }

        if (entry.signal && !entry.signal->divergent && !entry.operator_above.divergent &&
            std::abs(entry.signal->extrapolated_limit - entry.operator_above.extrapolated_limit) > tol) {
            report.warnings.push_back("signal-level and operator-level ergodic limits differ at xi = " +
                                      format_xi(p.xi));
        }
        if (entry.operator_below && !entry.operator_below->divergent && !entry.operator_above.divergent &&
            std::abs(entry.operator_below->extrapolated_limit - entry.operator_above.extrapolated_limit) > tol) {
            report.warnings.push_back("ergodic limits from above and below differ at xi = " + format_xi(p.xi));
        }
        report.ergodic_results.push_back(std::move(entry));
    }

    report.hypotheses_hold = report.countable && report.forcing_in_C0n == DecayClass::Decayed;
    if (report.forcing_in_C0n != DecayClass::Decayed) {
        report.failed_hypothesis = "forcing not shown to be in C_{0,n} (verdict " +
                                   std::string(to_string(report.forcing_in_C0n)) + ")";
    }
    for (const ErgodicEntry& e : report.ergodic_results) {
        if (e.status == ErgodicStatus::Vanishing) continue;
        if (report.hypotheses_hold) {
            std::string what;
            switch (e.status) {
                case ErgodicStatus::Divergent: what = "divergent ergodic mean"; break;
                case ErgodicStatus::Nonzero: what = "nonzero ergodic mean"; break;
                default: what = "ergodic mean not computable on this grid"; break;
            }
            report.failed_hypothesis = what + " at xi = " + format_xi(e.point.xi);
        }
        report.hypotheses_hold = false;
    }
    return report;
}

WellPosedness check_well_posedness(const Scenario& scenario, std::size_t samples) {
    const int n = scenario.degree;
    const std::size_t steps = scenario.grid.steps;
    const Eigen::Index d = scenario.A.dimension();
    samples = std::max<std::size_t>(4, std::min(samples, steps));

    std::vector<double> times;
    std::vector<double> norms;
    if (scenario.A.diagonalizable()) {
        for (std::size_t k = 0; k <= samples; ++k) {
            const double t = scenario.grid.t_max * static_cast<double>(k) / static_cast<double>(samples);
            const CMatrix S = resolvent_family(scenario.A, scenario.alpha, t);
            times.push_back(t);
            norms.push_back(S.operatorNorm() / weight(t, n));
        }
    } else {
        // columns of S_α(t) from the time stepper
        Scenario unit = scenario;
        unit.forcing = Forcing{};
        std::vector<SampledSignal> columns;
        for (Eigen::Index i = 0; i < d; ++i) {
            unit.x0 = CVector::Unit(d, i);
            columns.push_back(adams_oracle(unit));
        }
        const std::size_t stride = std::max<std::size_t>(1, steps / samples);
        for (std::size_t j = 0; j <= steps; j += stride) {
            CMatrix S(d, d);
            for (Eigen::Index i = 0; i < d; ++i) S.col(i) = columns[static_cast<std::size_t>(i)].at(j);
            const double t = columns.front().time(j);
            times.push_back(t);
            norms.push_back(S.operatorNorm() / weight(t, n));
        }
    }
    const double split = 0.75 * scenario.grid.t_max;
    double head = 0.0;
    double tail = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        double& side = times[k] < split ? head : tail;
        side = std::max(side, norms[k]);
    }
    WellPosedness out;
    out.sup_weighted_norm = std::max(head, tail);
    out.bounded = std::isfinite(out.sup_weighted_norm) && tail <= 1.1 * head;
    return out;
}

DecayVerdict verify_decay(const Scenario& scenario) {
    const auto start = std::chrono::steady_clock::now();
    DecayVerdict verdict;
    SolveOutcome outcome = solve_with_residual(scenario);
    verdict.runtimes.solve = seconds_since(start);
    verdict.residual = outcome.residual;
    verdict.route = outcome.route;

    auto mark = std::chrono::steady_clock::now();
    verdict.report = check_hypotheses(scenario, outcome.u);
    verdict.runtimes.hypotheses = seconds_since(mark);

    mark = std::chrono::steady_clock::now();
    verdict.decay = decay_profile(outcome.u, scenario.degree, DecayOptions{5, scenario.tol.decay, 0.5});
    verdict.well_posed = check_well_posedness(scenario);
    verdict.runtimes.decay = seconds_since(mark);

    const bool hold = verdict.report.hypotheses_hold;
    verdict.consistent_with_theorem = !(hold && verdict.decay.verdict == DecayClass::NotDecayed);
    if (hold && verdict.decay.verdict == DecayClass::Inconclusive && !verdict.decay.tail_shrinking) {
        verdict.report.warnings.push_back("hypotheses hold but the tail is not visibly shrinking; extend grid.t_max");
    }
    if (!verdict.well_posed.bounded) {
        verdict.report.warnings.push_back("resolvent family grows faster than (1+t)^n on the grid");
    }
    verdict.solution = std::move(outcome.u);
    verdict.runtimes.total = seconds_since(start);
    return verdict;
}

InclusionCheck check_spectral_inclusion(const SampledSignal& u, int n, const BoundarySpectrum& boundary,
                                        double xi_min, double xi_max, std::size_t xi_steps) {
    if (xi_steps < 1 || !(xi_max > xi_min)) {
        throw DomainError("inclusion check needs xi_max > xi_min and at least one step");
    }
    std::vector<double> grid;
    const double step = (xi_max - xi_min) / static_cast<double>(xi_steps);
    for (std::size_t k = 0; k <= xi_steps; ++k) grid.push_back(xi_min + step * static_cast<double>(k));
    const std::vector<double> etas = laplace_admissible_etas(u, n, default_eta_sequence());
    InclusionCheck out;
    for (const ScanPoint& p : singularity_scan(u, n, grid, etas)) {
        if (p.order == 0) continue;
        out.singular.push_back(p);
        const bool matched = std::any_of(boundary.points.begin(), boundary.points.end(),
                                         [&](const BoundaryPoint& b) {
                                             return std::abs(b.xi - p.xi) <= step * (1.0 + 1e-9);
                                         });
        if (!matched) out.unmatched.push_back(p.xi);
    }
    return out;
}

namespace {

nlohmann::json diagnostic_json(const ErgodicDiagnostic& d) {
    return {{"limit", d.extrapolated_limit},
            {"converged", d.converged},
            {"divergent", d.divergent},
            {"etas", d.eta_values},
            {"scaled_norms", d.scaled_norms}};
}

void write_atomic(const fs::path& target, const std::function<void(std::ostream&)>& body) {
    fs::path temp = target;
    temp += ".tmp";
    {
        std::ofstream out(temp);
        if (!out) throw Error("cannot write " + temp.string());
        body(out);
        out.flush();
        if (!out) throw Error("failed writing " + temp.string());
    }
    fs::rename(temp, target);
}

}  // namespace

nlohmann::json report_json(const DecayVerdict& v) {
    nlohmann::json boundary = nlohmann::json::array();
    for (const BoundaryPoint& p : v.report.boundary_spectrum.points) {
        boundary.push_back({{"xi", p.xi}, {"reason", std::string(to_string(p.reason))}});
    }
    nlohmann::json ergodic = nlohmann::json::array();
    for (const ErgodicEntry& e : v.report.ergodic_results) {
        nlohmann::json entry = {{"xi", e.point.xi},
                                {"status", std::string(to_string(e.status))},
                                {"signal", e.signal ? diagnostic_json(*e.signal) : nlohmann::json(nullptr)},
                                {"operator", diagnostic_json(e.operator_above)},
                                {"operator_below", e.operator_below ? diagnostic_json(*e.operator_below)
                                                                    : nlohmann::json(nullptr)}};
        if (!e.below_note.empty()) entry["operator_below_note"] = e.below_note;
        ergodic.push_back(std::move(entry));
    }
    return {{"hypotheses_hold", v.report.hypotheses_hold},
            {"boundary_spectrum", boundary},
            {"ergodic_limits", ergodic},
            {"decay_verdict", std::string(to_string(v.decay.verdict))},
            {"tail_estimate", v.decay.tail_estimate},
            {"residual", v.residual},
            {"runtimes",
             {{"solve", v.runtimes.solve},
              {"hypotheses", v.runtimes.hypotheses},
              {"decay", v.runtimes.decay},
              {"total", v.runtimes.total}}},
            {"consistent_with_theorem", v.consistent_with_theorem},
            {"failed_hypothesis", v.report.failed_hypothesis},
            {"forcing_in_C0n", std::string(to_string(v.report.forcing_in_C0n))},
            {"route", v.route},
            {"well_posed", {{"sup_weighted_norm", v.well_posed.sup_weighted_norm}, {"bounded", v.well_posed.bounded}}},
            {"warnings", v.report.warnings}};
}

int run_scenario(const std::string& config_path, const std::string& out_dir, std::ostream& err) {
    try {
        const Scenario scenario = load_scenario(config_path);
        const DecayVerdict verdict = verify_decay(scenario);
        const fs::path dir(out_dir);
        fs::create_directories(dir);
        write_atomic(dir / "u.csv", [&](std::ostream& out) { write_signal_csv(out, *verdict.solution); });
        write_atomic(dir / "spectrum.csv", [&](std::ostream& out) {
            out << "xi,reason\n" << std::setprecision(17);
            for (const BoundaryPoint& p : verdict.report.boundary_spectrum.points) {
                out << p.xi << ',' << to_string(p.reason) << '\n';
            }
        });
        write_atomic(dir / "report.json", [&](std::ostream& out) { out << report_json(verdict).dump(2) << '\n'; });
        for (const std::string& w : verdict.report.warnings) {
            err << "warning: " << config_path << ": " << w << '\n';
        }
        if (!verdict.consistent_with_theorem) {
            err << "falsification trigger: " << config_path
                << ": hypotheses hold but the solution did not decay\n";
            return 2;
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << config_path << ": " << e.what() << '\n';
        return 1;
    }
}

unsigned batch_threads() {
    if (const char* env = std::getenv("FRACSPEC_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<int> run_batch(const std::vector<BatchJob>& jobs, std::ostream& err) {
    std::vector<int> codes(jobs.size(), 1);
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            std::ostringstream local;
            codes[i] = run_scenario(jobs[i].config_path, jobs[i].out_dir, local);
            const std::lock_guard<std::mutex> lock(err_mutex);
            err << local.str();
        }
    };
    const unsigned count = std::min<unsigned>(batch_threads(), static_cast<unsigned>(std::max<std::size_t>(1, jobs.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
    return codes;
}

}  // namespace fracspec
