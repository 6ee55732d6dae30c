#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdlib>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "corpus.hpp"
#include "fracspec/cauchy_solver.hpp"
#include "fracspec/signal_io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

// stdout only unless the command redirects stderr itself
Run run(const std::string& args) {
    const std::string cmd = std::string(FRACSPEC_CLI) + " " + args;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string scenario(const std::string& name) {
    return std::string(FRACSPEC_SCENARIOS) + "/" + name + ".toml";
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("fracspec_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::pair<double, double> parse_pair(const std::string& line) {
    const auto comma = line.find(',');
    return {std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))};
}

}  // namespace

TEST_CASE("help and usage errors") {
    const Run help = run("--help");
    CHECK(help.code == 0);
    for (const char* sub : {"solve", "spectrum", "scan", "ergodic", "verify", "ml"}) {
        CHECK(help.out.find(sub) != std::string::npos);
    }
    CHECK(run("ml --help").code == 0);
    CHECK(run("2>/dev/null").code == 1);
    CHECK(run("frobnicate 2>/dev/null").code == 1);
    CHECK(run("ml --re 1 2>/dev/null").code == 1);
    CHECK(run("solve --config x.toml 2>/dev/null").code == 1);
    CHECK(run("scan --signal x.csv --xi-steps 0 2>/dev/null").code == 1);
}

TEST_CASE("ml prints re,im") {
    const Run e = run("ml --alpha 1 --re 1");
    CHECK(e.code == 0);
    const auto [re, im] = parse_pair(e.out);
    CHECK(re == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
    CHECK(im == 0.0);

    const auto [c, ci] = parse_pair(run("ml --alpha 2 --beta 1 --re -1 --im 0").out);
    CHECK(std::abs(c - std::cos(1.0)) <= 1e-10);
    CHECK(std::abs(ci) <= 1e-15);

    // 17 significant digits
    const Run h = run("ml --alpha 0.5 --re -1");
    CHECK(h.out.substr(0, h.out.find(',')).size() >= 18);
    CHECK(parse_pair(h.out).first == doctest::Approx(0.4275836).epsilon(1e-7));

    std::ifstream ref(std::string(FRACSPEC_TEST_DATA) + "/ml_reference.txt");
    REQUIRE(ref);
    int checked = 0;
    for (std::string line; std::getline(ref, line) && checked < 5;) {
        std::istringstream in(line);
        double a, b, x, y, er, ei;
        if (!(in >> a >> b >> x >> y >> er >> ei)) continue;
        std::ostringstream args;
        args.precision(17);
        args << "ml --alpha " << a << " --beta " << b << " --re " << x << " --im " << y;
        const auto [vr, vi] = parse_pair(run(args.str()).out);
        CHECK(std::abs(fracspec::cplx(vr, vi) - fracspec::cplx(er, ei)) <= 1e-10 * std::max(1.0, std::hypot(er, ei)));
        ++checked;
    }
    CHECK(checked == 5);
}

TEST_CASE("spectrum prints xi,reason") {
    const Run r = run("spectrum --config " + scenario("rotation"));
    CHECK(r.code == 0);
    CHECK(r.out == "xi,reason\n1,EigenvalueHit\n");
    const Run s = run("spectrum --config " + scenario("scalar_fractional"));
    CHECK(s.out == "xi,reason\n0,BranchPoint\n");
    CHECK(run("spectrum --config /nonexistent.toml 2>/dev/null").code == 1);
}

TEST_CASE("solve, scan and ergodic on the rotation") {
    const fs::path dir = scratch("solve");
    const std::string u = (dir / "u.csv").string();
    const Run r = run("solve --config " + scenario("rotation") + " --out " + u + " 2>&1");
    CHECK(r.code == 0);
    CHECK(r.out.find("route spectral") != std::string::npos);
    const fracspec::SampledSignal written = fracspec::read_signal_csv(u);
    CHECK(written.values() == fracspec::solve_forced(fracspec::load_scenario(scenario("rotation"))).values());

    const Run scan = run("scan --signal " + u + " --degree 0 --xi-min -2 --xi-max 2 --xi-steps 8");
    CHECK(scan.code == 0);
    const auto rows = lines(scan.out);
    REQUIRE(rows.size() == 10);
    CHECK(rows[0] == "xi,order,fit_slope");
    for (std::size_t k = 1; k < rows.size(); ++k) {
        std::istringstream in(rows[k]);
        std::string xi, order;
        std::getline(in, xi, ',');
        std::getline(in, order, ',');
        INFO(rows[k]);
        CHECK((std::stod(order) > 0) == (std::stod(xi) == 1.0));
    }

    const Run sig = run("ergodic --signal " + u + " --zeta 1");
    CHECK(sig.code == 0);
    CHECK(sig.out.rfind("eta,scaled_norm\n", 0) == 0);
    CHECK(sig.out.find("# limit=") != std::string::npos);

    const Run op = run("ergodic --config " + scenario("rotation") + " --zeta 1");
    CHECK(op.code == 0);
    const auto oplines = lines(op.out);
    REQUIRE(oplines.size() == 12);  // header, ten eta, summary
    CHECK(std::stod(oplines.back().substr(8)) == doctest::Approx(1.0).epsilon(1e-6));

    CHECK(run("ergodic --zeta 1 2>/dev/null").code == 1);
    CHECK(run("ergodic --signal " + u + " --config " + scenario("rotation") + " 2>/dev/null").code == 1);
    CHECK(run("solve --config /nonexistent.toml --out " + u + " 2>/dev/null").code == 1);
    fs::remove_all(dir);
}

TEST_CASE("verify exit codes") {
    const fs::path dir = scratch("verify");
    const Run one = run("verify --config " + scenario("scalar_fractional") + " --out " + (dir / "one").string());
    CHECK(one.code == 0);
    CHECK(fs::exists(dir / "one" / "report.json"));
    CHECK(fs::exists(dir / "one" / "u.csv"));
    CHECK(fs::exists(dir / "one" / "spectrum.csv"));

    const Run err = run("verify --config /nonexistent.toml --out " + (dir / "x").string() + " 2>&1");
    CHECK(err.code == 1);
    CHECK(err.out.find("error:") != std::string::npos);

    {
        std::ofstream slow(dir / "slow.toml");
        slow << "alpha = 1\ndegree = 0\nmatrix = \"-0.0001\"\nx0 = \"1\"\nforcing.kind = \"zero\"\n"
                "grid.t_max = 100\ngrid.steps = 1600\n";
    }
    CHECK(run("verify --config " + (dir / "slow.toml").string() + " --out " + (dir / "s").string() +
              " 2>/dev/null").code == 2);

    // batch: one output directory per config stem, worst code wins
    const Run batch = run("verify --config " + scenario("rotation") + " " + scenario("jordan") + " " +
                          (dir / "slow.toml").string() + " --out " + (dir / "batch").string() + " 2>/dev/null");
    CHECK(batch.code == 2);
    CHECK(fs::exists(dir / "batch" / "rotation" / "report.json"));
    CHECK(fs::exists(dir / "batch" / "jordan" / "report.json"));
    CHECK(lines(batch.out).size() == 3);

    setenv("FRACSPEC_THREADS", "2", 1);
    const Run mixed = run("verify --config " + scenario("rotation") + " /nonexistent.toml --out " +
                          (dir / "mixed").string() + " 2>/dev/null");
    unsetenv("FRACSPEC_THREADS");
    CHECK(mixed.code == 1);
    CHECK(fs::exists(dir / "mixed" / "rotation" / "report.json"));
    fs::remove_all(dir);
}
