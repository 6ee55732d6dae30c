#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fracspec/cauchy_solver.hpp"
#include "fracspec/dd_resolvent.hpp"
#include "fracspec/operator_spectrum.hpp"
#include "fracspec/weighted_space.hpp"

#include <json.hpp>

namespace fracspec {

enum class ErgodicStatus { Vanishing, Nonzero, Divergent, NotComputable };
std::string_view to_string(ErgodicStatus s);

/// Ergodic data at one boundary point ξ.
struct ErgodicEntry {
    BoundaryPoint point;
    /// η·(η + iξ − d/dt)^{-1} u in the n-weighted norm; empty when no η is
    /// admissible on the grid.
    std::optional<ErgodicDiagnostic> signal;
    /// η·R_α(η + iξ, A) x0.
    ErgodicDiagnostic operator_above;
    /// η·R_α(−η + iξ, A) x0; empty when that path crosses the branch cut.
    std::optional<ErgodicDiagnostic> operator_below;
    std::string below_note;
    ErgodicStatus status = ErgodicStatus::NotComputable;
};

struct HypothesisReport {
    BoundarySpectrum boundary_spectrum;
    bool countable = true;
    DecayClass forcing_in_C0n = DecayClass::Inconclusive;
    std::vector<ErgodicEntry> ergodic_results;
    bool hypotheses_hold = false;
    /// Empty when the hypotheses hold; otherwise names the first failure.
    std::string failed_hypothesis;
    std::vector<std::string> warnings;
};

/// Empirical check of sup_t ‖S_α(t)‖/(1+t)^n < ∞ on the grid.
struct WellPosedness {
    double sup_weighted_norm = 0.0;
    /// The last quarter of the grid does not exceed 1.1 x the earlier sup.
    bool bounded = false;
};

struct Runtimes {
    double solve = 0.0;
    double hypotheses = 0.0;
    double decay = 0.0;
    double total = 0.0;
};

struct DecayVerdict {
    HypothesisReport report;
    DecayReport decay;
    bool consistent_with_theorem = true;
    double residual = 0.0;
    std::string route;
    WellPosedness well_posed;
    Runtimes runtimes;
    std::optional<SampledSignal> solution;
};

HypothesisReport check_hypotheses(const Scenario& scenario, const SampledSignal& u);

WellPosedness check_well_posedness(const Scenario& scenario, std::size_t samples = 64);

DecayVerdict verify_decay(const Scenario& scenario);

/// Singular points found by singularity_scan on u that are not within
/// `tolerance` of a boundary point.
struct InclusionCheck {
    std::vector<ScanPoint> singular;
    std::vector<double> unmatched;
};

InclusionCheck check_spectral_inclusion(const SampledSignal& u, int n, const BoundarySpectrum& boundary,
                                        double xi_min, double xi_max, std::size_t xi_steps);

nlohmann::json report_json(const DecayVerdict& verdict);

/// Writes u.csv, spectrum.csv and report.json into out_dir. Returns 0 when the
/// run is consistent with the theorem, 2 on a falsification trigger and 1 on
/// any error (reported on `err`).
int run_scenario(const std::string& config_path, const std::string& out_dir, std::ostream& err);

struct BatchJob {
    std::string config_path;
    std::string out_dir;
};

/// Runs jobs on up to FRACSPEC_THREADS workers (default: hardware threads).
/// Returns per-job exit codes in input order.
std::vector<int> run_batch(const std::vector<BatchJob>& jobs, std::ostream& err);

/// Worker count from FRACSPEC_THREADS, falling back to the hardware count.
unsigned batch_threads();

}  // namespace fracspec
