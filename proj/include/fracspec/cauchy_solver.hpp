#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

#include "fracspec/operator_spectrum.hpp"
#include "fracspec/signal.hpp"

namespace fracspec {

enum class ForcingKind { Zero, ExpDecay, Sinusoid, CustomCSV };

/// Zero, e^{−rate·t}·vector, e^{iξt}·vector, or samples read from a CSV file.
struct Forcing {
    ForcingKind kind = ForcingKind::Zero;
    double rate = 0.0;
    double xi = 0.0;
    CVector vector;
    std::string path;
};

struct TimeGrid {
    double t_max = 0.0;
    std::size_t steps = 0;

    [[nodiscard]] double dt() const { return t_max / static_cast<double>(steps); }
};

struct Tolerances {
    double decay = 1e-2;
    double residual = 1e-3;
    double ergodic = 1e-2;
};

/// D^α u = Au + f, u(0) = x0, judged in the (1+t)^n weighted norm.
struct Scenario {
    OperatorModel A;
    FractionalOrder alpha;
    int degree = 0;
    CVector x0;
    Forcing forcing;
    TimeGrid grid;
    Tolerances tol;
    /// Use adams_oracle when the spectral route refuses a defective matrix.
    bool adams_fallback = false;

    /// Forcing sampled on the scenario grid, carrying the scenario degree.
    [[nodiscard]] SampledSignal forcing_signal() const;
};

/// Flat `key = value` config (TOML-compatible subset). Relative CSV paths are
/// resolved against `base_dir`. Throws ConfigError on unknown or malformed keys.
Scenario parse_scenario(std::istream& in, const std::string& base_dir = ".");
Scenario load_scenario(const std::string& path);

/// S_α(t) = E_α(t^α A) = V·diag(E_α(t^α λ_i))·V^{−1}.
CMatrix resolvent_family(const OperatorModel& A, FractionalOrder alpha, double t);

struct SolveOutcome {
    SampledSignal u;
    double residual;
    /// "spectral" or "adams"
    std::string route;
};

/// Spectral route: u(t) = S_α(t)x0 + ∫_0^t (t−s)^{α−1} E_{α,α}((t−s)^α A) f(s) ds,
/// exact for piecewise-linear f, then checked with mild_residual.
/// DefectiveMatrix unless the scenario allows the Adams fallback.
SampledSignal solve_forced(const Scenario& scenario);

/// solve_forced, also returning the residual it was accepted with.
SolveOutcome solve_with_residual(const Scenario& scenario);

/// Fractional Adams predictor-corrector for u = x0 + J^α(Au + f).
SampledSignal adams_oracle(const Scenario& scenario);

/// max_j ‖u − A J^α u − J^α f − x0‖(t_j) / (1+t_j)^n.
double mild_residual(const SampledSignal& u, const Scenario& scenario);

}  // namespace fracspec
