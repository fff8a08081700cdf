#include "kslab/series.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace kslab {

std::string formatDouble(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void DiagnosticSeries::validate() const {
    if (rows.empty()) throw std::invalid_argument("series: at least one row required");
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (!(rows[i].t > rows[i - 1].t))
            throw std::invalid_argument("series: t must be strictly increasing");
}

std::string DiagnosticSeries::toCsv() const {
    std::string out(kDiagnosticsCsvHeader);
    out += '\n';
    for (const DiagnosticRow& r : rows) {
        out += formatDouble(r.t);
        out += ',';
        out += formatDouble(r.mass);
        out += ',';
        out += formatDouble(r.com.x);
        out += ',';
        out += formatDouble(r.com.y);
        out += ',';
        out += formatDouble(r.m2);
        out += ',';
        out += formatDouble(r.sGamma);
        out += ',';
        out += formatDouble(r.dGamma.asDouble());
        out += ',';
        out += formatDouble(r.logPair1.asDouble());
        out += ',';
        out += formatDouble(r.logPair2.asDouble());
        out += ',';
        out += formatDouble(r.maxBallMass);
        out += ',';
        out += formatDouble(r.gTriple);
        out += '\n';
    }
    return out;
}

} // namespace kslab
