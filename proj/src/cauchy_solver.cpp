#include "fracspec/cauchy_solver.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include <Eigen/LU>

#include "fracspec/errors.hpp"
#include "fracspec/frac_calculus.hpp"
#include "fracspec/signal_io.hpp"
#include "fracspec/special_fn.hpp"
#include "fracspec/weighted_space.hpp"

namespace fracspec {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string unquote(std::string s) {
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

double parse_real(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
    }
    if (trim(text.substr(used)).size() != 0) {
        throw ConfigError("key '" + key + "': trailing characters in '" + text + "'");
    }
    return v;
}

// "re:im" or plain "re"
cplx parse_complex(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    const auto colon = t.find(':');
    if (colon == std::string::npos) {
        return {parse_real(key, t), 0.0};
    }
    return {parse_real(key, trim(t.substr(0, colon))), parse_real(key, trim(t.substr(colon + 1)))};
}

std::vector<cplx> parse_complex_list(const std::string& key, const std::string& text) {
    std::vector<cplx> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_complex(key, item));
    }
    if (out.empty()) {
        throw ConfigError("key '" + key + "' is empty");
    }
    return out;
}

CVector to_vector(const std::vector<cplx>& v) {
    CVector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
    return out;
}

CMatrix parse_matrix(const std::string& text) {
    std::vector<std::vector<cplx>> rows;
    std::stringstream ss(text);
    std::string row;
    while (std::getline(ss, row, ';')) {
        if (trim(row).empty()) continue;
        rows.push_back(parse_complex_list("matrix", row));
    }
    if (rows.empty()) {
        throw ConfigError("key 'matrix' is empty");
    }
    const std::size_t d = rows.size();
    CMatrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) {
        if (rows[i].size() != d) {
            throw ConfigError("matrix must be square: row " + std::to_string(i) + " has " +
                              std::to_string(rows[i].size()) + " entries, expected " +
                              std::to_string(d));
        }
        for (std::size_t k = 0; k < d; ++k) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
        }
    }
    return m;
}

const std::vector<std::string> kKnownKeys = {
    "alpha",       "degree",     "matrix",        "x0",          "forcing.kind",
    "forcing.rate", "forcing.xi", "forcing.vector", "forcing.path", "grid.t_max",
    "grid.steps",  "tol.decay",  "tol.residual",  "tol.ergodic", "solver.fallback",
};

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& base_dir) {
    std::map<std::string, std::string> kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        // strip comments outside quotes
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            if (line[i] == '#' && !quoted) {
                line.resize(i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        if (kv.count(key)) {
            throw ConfigError("duplicate key '" + key + "'");
        }
        kv[key] = unquote(trim(line.substr(eq + 1)));
    }
    auto require = [&](const std::string& key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) {
            throw ConfigError("missing required key '" + key + "'");
        }
        return it->second;
    };
    auto real_or = [&](const std::string& key, double fallback) {
        const auto it = kv.find(key);
        return it == kv.end() ? fallback : parse_real(key, it->second);
    };

    double alpha_value = parse_real("alpha", require("alpha"));
    std::optional<FractionalOrder> alpha;
    try {
        alpha.emplace(alpha_value);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("key 'alpha': ") + e.what());
    }
    OperatorModel A(parse_matrix(require("matrix")));

    const double degree_value = real_or("degree", 0.0);
    if (degree_value < 0.0 || degree_value != std::floor(degree_value) || degree_value > 16.0) {
        throw ConfigError("key 'degree' must be a small non-negative integer");
    }
    CVector x0 = to_vector(parse_complex_list("x0", require("x0")));
    if (x0.size() != A.dimension()) {
        throw ConfigError("x0 has " + std::to_string(x0.size()) + " entries, matrix dimension is " +
                          std::to_string(A.dimension()));
    }

    Forcing forcing;
    const std::string kind = kv.count("forcing.kind") ? kv["forcing.kind"] : "zero";
    if (kind == "zero") {
        forcing.kind = ForcingKind::Zero;
    } else if (kind == "exp_decay" || kind == "sinusoid") {
        forcing.kind = kind == "exp_decay" ? ForcingKind::ExpDecay : ForcingKind::Sinusoid;
        forcing.rate = real_or("forcing.rate", 1.0);
        forcing.xi = real_or("forcing.xi", 0.0);
        forcing.vector = to_vector(parse_complex_list("forcing.vector", require("forcing.vector")));
        if (forcing.vector.size() != A.dimension()) {
            throw ConfigError("forcing.vector dimension does not match the matrix");
        }
    } else if (kind == "csv") {
        forcing.kind = ForcingKind::CustomCSV;
        std::filesystem::path p(require("forcing.path"));
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        forcing.path = p.string();
    } else {
        throw ConfigError("forcing.kind must be zero, exp_decay, sinusoid or csv; got '" + kind + "'");
    }

    TimeGrid grid;
    grid.t_max = parse_real("grid.t_max", require("grid.t_max"));
    const double steps = parse_real("grid.steps", require("grid.steps"));
    if (!(grid.t_max > 0.0) || !(steps >= 2.0) || steps != std::floor(steps)) {
        throw ConfigError("grid needs t_max > 0 and an integer steps >= 2");
    }
    grid.steps = static_cast<std::size_t>(steps);

    Tolerances tol;
    tol.decay = real_or("tol.decay", tol.decay);
    tol.residual = real_or("tol.residual", tol.residual);
    tol.ergodic = real_or("tol.ergodic", tol.ergodic);
    if (!(tol.decay > 0.0 && tol.residual > 0.0 && tol.ergodic > 0.0)) {
        throw ConfigError("tolerances must be positive");
    }

    bool fallback = false;
    if (kv.count("solver.fallback")) {
        const std::string& f = kv["solver.fallback"];
        if (f == "adams") {
            fallback = true;
        } else if (f != "none") {
            throw ConfigError("solver.fallback must be adams or none");
        }
    }
    return Scenario{std::move(A), *alpha, static_cast<int>(degree_value), std::move(x0),
                    std::move(forcing), grid, tol, fallback};
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path);
    }
    const auto parent = std::filesystem::path(path).parent_path();
    return parse_scenario(in, parent.empty() ? "." : parent.string());
}

SampledSignal Scenario::forcing_signal() const {
    const double dt = grid.dt();
    const Eigen::Index d = A.dimension();
    switch (forcing.kind) {
        case ForcingKind::Zero:
            return SampledSignal(dt, CMatrix::Zero(d, static_cast<Eigen::Index>(grid.steps + 1)), degree);
        case ForcingKind::ExpDecay:
            return SampledSignal::from_function(
                dt, grid.steps, d, [&](double t) -> CVector { return std::exp(-forcing.rate * t) * forcing.vector; },
                degree);
        case ForcingKind::Sinusoid:
            return SampledSignal::from_function(
                dt, grid.steps, d,
                [&](double t) -> CVector { return std::polar(1.0, forcing.xi * t) * forcing.vector; }, degree);
        case ForcingKind::CustomCSV: {
            SampledSignal f = read_signal_csv(forcing.path, degree);
            const SampledSignal reference(dt, CMatrix::Zero(d, static_cast<Eigen::Index>(grid.steps + 1)), degree);
            if (!f.same_grid(reference)) {
                throw GridMismatch("forcing CSV does not match the scenario grid");
            }
            return f;
        }
    }
    throw ConfigError("unknown forcing kind");
}

CMatrix resolvent_family(const OperatorModel& A, FractionalOrder alpha, double t) {
    if (!(t >= 0.0)) {
        throw DomainError("resolvent family needs t >= 0");
    }
    const Eigen::Index d = A.dimension();
    if (t == 0.0) {
        return CMatrix::Identity(d, d);
    }
    const CMatrix& V = A.eigenvectors();
    const double ta = std::pow(t, alpha.value());
    CVector e(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        e(i) = mittag_leffler(alpha.value(), 1.0, ta * A.eigenvalues()(i));
    }
    return V * e.asDiagonal() * A.eigenvectors_inverse();
}

namespace {

SampledSignal spectral_solve(const Scenario& s) {
    const OperatorModel& A = s.A;
    const CMatrix& V = A.eigenvectors();
    const CMatrix& Vinv = A.eigenvectors_inverse();
    const double a = s.alpha.value();
    const double dt = s.grid.dt();
    const std::size_t M = s.grid.steps;
    const Eigen::Index d = A.dimension();
    const auto cols = static_cast<Eigen::Index>(M + 1);

    // modal coordinates
    CMatrix v = CMatrix::Zero(d, cols);
    const CVector y0 = Vinv * s.x0;
    std::vector<double> tpow(M + 1);
    for (std::size_t j = 0; j <= M; ++j) {
        tpow[j] = std::pow(static_cast<double>(j) * dt, a);
    }
    for (Eigen::Index i = 0; i < d; ++i) {
        const cplx lambda = A.eigenvalues()(i);
        if (y0(i) == cplx{0.0, 0.0}) continue;
        v(i, 0) = y0(i);
        for (std::size_t j = 1; j <= M; ++j) {
            v(i, static_cast<Eigen::Index>(j)) = y0(i) * mittag_leffler(a, 1.0, lambda * tpow[j]);
        }
    }

    if (s.forcing.kind != ForcingKind::Zero) {
        const CMatrix w = Vinv * s.forcing_signal().values();
        for (Eigen::Index i = 0; i < d; ++i) {
            if (w.row(i).isZero(0.0)) continue;
            const cplx lambda = A.eigenvalues()(i);
            // Φ1(τ) = ∫_0^τ φ, Φ2(τ) = ∫_0^τ Φ1 with φ(τ) = τ^{α−1} E_{α,α}(λτ^α)
            std::vector<cplx> phi1(M + 1), phi2(M + 1);
            phi1[0] = 0.0;
            phi2[0] = 0.0;
            for (std::size_t m = 1; m <= M; ++m) {
                const double tau = static_cast<double>(m) * dt;
                const cplx z = lambda * tpow[m];
                phi1[m] = tpow[m] * mittag_leffler(a, a + 1.0, z);
                phi2[m] = tpow[m] * tau * mittag_leffler(a, a + 2.0, z);
            }
            // hat-function weights
            std::vector<cplx> c(M + 1);
            c[0] = phi2[1] / dt;
            for (std::size_t m = 1; m < M; ++m) {
                c[m] = (phi2[m + 1] - 2.0 * phi2[m] + phi2[m - 1]) / dt;
            }
            for (std::size_t j = 1; j <= M; ++j) {
                cplx acc = (phi1[j] - (phi2[j] - phi2[j - 1]) / dt) * w(i, 0);
                for (std::size_t k = 1; k <= j; ++k) {
                    acc += c[j - k] * w(i, static_cast<Eigen::Index>(k));
                }
                v(i, static_cast<Eigen::Index>(j)) += acc;
            }
        }
    }
    return SampledSignal(dt, V * v, s.degree);
}

}  // namespace

SolveOutcome solve_with_residual(const Scenario& scenario) {
    std::string route = "spectral";
    std::optional<SampledSignal> u;
    if (!scenario.A.diagonalizable()) {
        if (!scenario.adams_fallback) {
            throw DefectiveMatrix("matrix is not diagonalizable; enable solver.fallback = adams");
        }
        route = "adams";
        u = adams_oracle(scenario);
    } else {
        u = spectral_solve(scenario);
    }
    const double residual = mild_residual(*u, scenario);
    if (!(residual <= scenario.tol.residual)) {
        std::ostringstream msg;
        msg << "mild-solution residual " << residual << " exceeds " << scenario.tol.residual << " ("
            << route << " route)";
        throw ResidualTooLarge(msg.str());
    }
    return {std::move(*u), residual, route};
}

SampledSignal solve_forced(const Scenario& scenario) {
    return solve_with_residual(scenario).u;
}

namespace {

// Starting weights (Lubich) that make the product-trapezoid rule exact for
// the t^γ, γ = kα < 1, a mild solution carries near t = 0. Without them the
// rule loses accuracy like dt^{2α} over the first steps.
// Exponents in (1, 2) are left out: the second-order rule is already close
// there, and fitting its smooth O(dt²t^{γ+α−2}) defect onto the first nodes
// makes the correction grow with t.
struct StartingWeights {
    Eigen::Index nodes = 0;     // corrections act on h_0 .. h_{nodes−1}
    Eigen::MatrixXd weight;     // nodes × m, column j is added at t_j
};

StartingWeights starting_weights(const ProductWeights& weights, std::size_t m) {
    const double alpha = weights.alpha();
    const double dt = weights.dt();
    std::vector<double> extra;
    for (int k = 1; k * alpha < 1.0; ++k) {
        const double g = k * alpha;
        if (std::abs(g - std::nearbyint(g)) > 1e-9) extra.push_back(g);
    }
    std::sort(extra.begin(), extra.end());
    extra.erase(std::unique(extra.begin(), extra.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                extra.end());
    if (extra.size() > 3) extra.resize(3);
    std::vector<double> gammas{0.0, 1.0};
    gammas.insert(gammas.end(), extra.begin(), extra.end());

    const auto s = static_cast<Eigen::Index>(gammas.size());
    if (extra.empty() || m <= static_cast<std::size_t>(s)) return {};

    // Exactness conditions in units of dt^γ: Σ_l w_{j,l} l^γ = e_γ(j) / dt^γ.
    Eigen::MatrixXd W(s, s);
    for (Eigen::Index q = 0; q < s; ++q) {
        for (Eigen::Index l = 0; l < s; ++l) {
            W(q, l) = (l == 0) ? (gammas[static_cast<std::size_t>(q)] == 0.0 ? 1.0 : 0.0)
                               : std::pow(static_cast<double>(l), gammas[static_cast<std::size_t>(q)]);
        }
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(W);

    // defect of the base rule on each t^γ, γ in `extra`
    Eigen::MatrixXd defect = Eigen::MatrixXd::Zero(s, static_cast<Eigen::Index>(m));
    for (std::size_t e = 0; e < extra.size(); ++e) {
        const double g = extra[e];
        CMatrix samples(1, static_cast<Eigen::Index>(m));
        for (std::size_t j = 0; j < m; ++j) samples(0, static_cast<Eigen::Index>(j)) = std::pow(j * dt, g);
        const CMatrix approx = weights.apply(samples);
        const double c = std::exp(std::lgamma(g + 1.0) - std::lgamma(g + 1.0 + alpha));
        const auto q = static_cast<Eigen::Index>(2 + e);
        for (std::size_t j = 1; j < m; ++j) {
            const double t = j * dt;
            defect(q, static_cast<Eigen::Index>(j)) =
                (c * std::pow(t, g + alpha) - approx(0, static_cast<Eigen::Index>(j)).real()) / std::pow(dt, g);
        }
    }
    return {s, lu.solve(defect)};
}

CMatrix integral_with_starting_weights(const SampledSignal& u, double alpha) {
    const ProductWeights weights(alpha, u.dt(), u.size() - 1);
    CMatrix out = weights.apply(u.values());
    const StartingWeights start = starting_weights(weights, u.size());
    for (Eigen::Index j = 1; j < out.cols(); ++j) {
        for (Eigen::Index l = 0; l < start.nodes; ++l) {
            out.col(j) += start.weight(l, j) * u.values().col(l);
        }
    }
    return out;
}

}  // namespace

SampledSignal adams_oracle(const Scenario& s) {
    const double a = s.alpha.value();
    const double dt = s.grid.dt();
    const std::size_t M = s.grid.steps;
    const CMatrix& A = s.A.matrix();
    const Eigen::Index d = s.A.dimension();

    const double contraction = A.operatorNorm() * std::pow(dt, a) / std::tgamma(a + 1.0);
    if (contraction >= 1.0) {
        std::ostringstream msg;
        msg << "corrector is not contractive: |A| dt^alpha / Gamma(alpha+1) = " << contraction;
        throw StepSizeTooLarge(msg.str());
    }
    const SampledSignal f = s.forcing_signal();
    const ProductWeights corrector(a, dt, M);
    const std::vector<double> predictor = rectangle_weights(a, dt, M);
    const StartingWeights start = starting_weights(corrector, M + 1);
    const Eigen::Index S = start.nodes;

    CMatrix u(d, static_cast<Eigen::Index>(M + 1));
    CMatrix g(d, static_cast<Eigen::Index>(M + 1));  // A u_k + f_k
    u.col(0) = s.x0;
    g.col(0) = A * s.x0 + f.at(0);

    // The corrected rule at t_1 .. t_{S−1} refers to values not yet computed,
    // so that block of corrector equations is solved at once.
    std::size_t first_step = 0;
    if (S > 1) {
        const Eigen::Index B = S - 1;
        CMatrix K = CMatrix::Identity(B * d, B * d);
        CVector rhs(B * d);
        for (Eigen::Index j = 1; j <= B; ++j) {
            const auto jj = static_cast<std::size_t>(j);
            CVector r = s.x0 + (corrector.first(jj) + start.weight(0, j)) * g.col(0);
            for (Eigen::Index k = 1; k <= B; ++k) {
                double w = start.weight(k, j);
                if (k <= j) w += corrector.lag(static_cast<std::size_t>(j - k));
                if (w == 0.0) continue;
                K.block((j - 1) * d, (k - 1) * d, d, d) -= w * A;
                r += w * f.at(static_cast<std::size_t>(k));
            }
            rhs.segment((j - 1) * d, d) = r;
        }
        const CVector block = K.partialPivLu().solve(rhs);
        for (Eigen::Index j = 1; j <= B; ++j) {
            u.col(j) = block.segment((j - 1) * d, d);
            g.col(j) = A * u.col(j) + f.at(static_cast<std::size_t>(j));
        }
        first_step = static_cast<std::size_t>(B);
    }

    const double w0 = corrector.lag(0);
    for (std::size_t j = first_step; j < M; ++j) {
        const std::size_t next = j + 1;
        const auto nn = static_cast<Eigen::Index>(next);
        CVector history = s.x0 + corrector.first(next) * g.col(0);
        for (Eigen::Index l = 0; l < S; ++l) history += start.weight(l, nn) * g.col(l);
        CVector pred = s.x0;
        for (std::size_t k = 0; k <= j; ++k) {
            const auto kk = static_cast<Eigen::Index>(k);
            pred += predictor[j - k] * g.col(kk);
            if (k >= 1) history += corrector.lag(next - k) * g.col(kk);
        }
        const CVector f_next = f.at(next);
        CVector current = pred;
        for (int iter = 0; iter < 100; ++iter) {
            CVector updated = history + w0 * (A * current + f_next);
            const double change = (updated - current).norm();
            current = std::move(updated);
            if (change <= 1e-15 * std::max(1.0, current.norm())) break;
        }
        u.col(nn) = current;
        g.col(nn) = A * current + f_next;
    }
    return SampledSignal(dt, std::move(u), s.degree);
}

double mild_residual(const SampledSignal& u, const Scenario& s) {
    const SampledSignal f = s.forcing_signal();
    if (!u.same_grid(f)) {
        throw GridMismatch("solution is not on the scenario grid");
    }
    const SampledSignal Ju(u.dt(), integral_with_starting_weights(u, s.alpha.value()), u.degree());
    const SampledSignal Jf = frac_integral(f, s.alpha);
    CMatrix r = u.values() - s.A.matrix() * Ju.values() - Jf.values();
    r.colwise() -= s.x0;
    return weighted_norm(SampledSignal(u.dt(), std::move(r), s.degree), s.degree);
}

}  // namespace fracspec
