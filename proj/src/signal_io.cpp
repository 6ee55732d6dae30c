#include "fracspec/signal_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "fracspec/errors.hpp"

namespace fracspec {

void write_signal_csv(std::ostream& out, const SampledSignal& f) {
    out << 't';
    for (Eigen::Index i = 0; i < f.dim(); ++i) {
        out << ",re_" << i << ",im_" << i;
    }
    out << '\n' << std::setprecision(17);
    for (std::size_t j = 0; j < f.size(); ++j) {
        out << f.time(j);
        for (Eigen::Index i = 0; i < f.dim(); ++i) {
            const cplx v = f.at(j)(i);
            out << ',' << v.real() << ',' << v.imag();
        }
        out << '\n';
    }
}

void write_signal_csv(const std::string& path, const SampledSignal& f) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open " + path + " for writing");
    }
    write_signal_csv(out, f);
    if (!out) {
        throw Error("failed writing " + path);
    }
}

SampledSignal read_signal_csv(std::istream& in, int degree) {
    std::string line;
    if (!std::getline(in, line)) {
        throw Error("empty signal file");
    }
    std::vector<double> times;
    std::vector<std::vector<double>> rows;
    std::size_t columns = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            // trailing blanks and a CR are fine, anything else is not
            if (used == 0 || cell.find_first_not_of(" \t\r", used) != std::string::npos) {
                throw Error("malformed number '" + cell + "' in signal file");
            }
            row.push_back(v);
        }
        if (row.size() < 3 || row.size() % 2 == 0) {
            throw Error("signal rows need t followed by re,im pairs");
        }
        if (columns == 0) columns = row.size();
        if (row.size() != columns) {
            throw Error("signal rows have inconsistent column counts");
        }
        times.push_back(row[0]);
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) {
        throw TooFewPoints("signal file needs at least two samples");
    }
    const double dt = times[1] - times[0];
    if (times[0] != 0.0 || !(dt > 0.0)) {
        throw GridError("signal grid must start at 0 with positive spacing");
    }
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (std::abs(times[j] - static_cast<double>(j) * dt) > 1e-9 * std::max(1.0, times[j])) {
            throw GridError("signal grid is not uniform");
        }
    }
    const auto d = static_cast<Eigen::Index>((columns - 1) / 2);
    CMatrix values(d, static_cast<Eigen::Index>(rows.size()));
    for (std::size_t j = 0; j < rows.size(); ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            values(i, static_cast<Eigen::Index>(j)) =
                cplx{rows[j][static_cast<std::size_t>(1 + 2 * i)], rows[j][static_cast<std::size_t>(2 + 2 * i)]};
        }
    }
    return SampledSignal(dt, std::move(values), degree);
}

SampledSignal read_signal_csv(const std::string& path, int degree) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path);
    }
    return read_signal_csv(in, degree);
}

}  // namespace fracspec
