#include "pwave/energy.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "pwave/errors.hpp"
#include "pwave/grid_norms.hpp"

namespace pwave {

double energy(const ReferenceState& s)
{
    const double kinetic = 0.5 * s.L * trapezoid_square(s.w);
    const double potential = std::pow(s.L, 1.0 - s.p) * gradient_power_integral(s.v, s.p) / s.p;
    return kinetic + potential;
}

double dissipation(const ReferenceState& s)
{
    return gradient_power_integral(s.w, 2.0) / s.L;
}

EnergyTrace identity_residuals(std::span<const ReferenceState> states)
{
    if (states.size() < 2) throw ArgumentError("identity residuals need at least two states");
    EnergyTrace trace;
    trace.samples.reserve(states.size());
    for (std::size_t n = 0; n < states.size(); ++n) {
        const auto& s = states[n];
        EnergySample e{s.t, energy(s), dissipation(s), s.L, 0.0};
        if (n > 0) {
            const auto& prev = trace.samples.back();
            if (!(s.t > prev.t)) throw ArgumentError("identity residuals need strictly increasing times");
            e.residual = e.E - prev.E + 0.5 * (prev.D + e.D) * (s.t - prev.t);
        }
        trace.samples.push_back(e);
    }
    return trace;
}

std::vector<std::size_t> monotonicity_violations(const EnergyTrace& trace, double rel_budget)
{
    std::vector<std::size_t> bad;
    if (trace.empty()) return bad;
    const double slack = rel_budget * trace.front().E;
    for (std::size_t n = 1; n < trace.size(); ++n) {
        const auto& a = trace.samples[n - 1];
        const auto& b = trace.samples[n];
        if (b.E > a.E + std::abs(b.residual) + slack) bad.push_back(n);
    }
    return bad;
}

double max_abs_residual(const EnergyTrace& trace)
{
    double m = 0.0;
    for (const auto& s : trace.samples) m = std::max(m, std::abs(s.residual));
    return m;
}

double total_abs_residual(const EnergyTrace& trace)
{
    double sum = 0.0;
    for (const auto& s : trace.samples) sum += std::abs(s.residual);
    return sum;
}

std::string format_double(double x)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const EnergyTrace& trace, const std::vector<double>* bound)
{
    if (bound && bound->size() != trace.size())
        throw ArgumentError("bound column length does not match the trace");
    out << "t,E,D,L,residual" << (bound ? ",bound" : "") << '\n';
    for (std::size_t n = 0; n < trace.size(); ++n) {
        const auto& s = trace.samples[n];
        out << format_double(s.t) << ',' << format_double(s.E) << ',' << format_double(s.D) << ','
            << format_double(s.L) << ',' << format_double(s.residual);
        if (bound) out << ',' << format_double((*bound)[n]);
        out << '\n';
    }
}

EnergyTrace read_trace_csv(std::istream& in)
{
    std::string line;
    int lineno = 0;
    if (!std::getline(in, line)) throw ParseError("empty trace CSV", 0);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,E,D,L,residual" && line != "t,E,D,L,residual,bound")
        throw ParseError("trace CSV header must be \"t,E,D,L,residual\", got \"" + line + "\"", lineno, "header");

    EnergyTrace trace;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        double vals[6];
        int count = 0;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        while (p <= end && count < 6) {
            auto r = std::from_chars(p, end, vals[count]);
            if (r.ec != std::errc()) {
                std::ostringstream os;
                os << "trace CSV line " << lineno << ": bad number in column " << count + 1;
                throw ParseError(os.str(), lineno);
            }
            ++count;
            p = r.ptr;
            if (p == end) break;
            if (*p != ',') throw ParseError("trace CSV line " + std::to_string(lineno) + ": expected ','", lineno);
            ++p;
        }
        if (count < 5 || p != end)
            throw ParseError("trace CSV line " + std::to_string(lineno) + ": expected 5 columns", lineno);
        EnergySample s{vals[0], vals[1], vals[2], vals[3], vals[4]};
        if (!trace.empty() && !(s.t > trace.back().t))
            throw ParseError("trace CSV line " + std::to_string(lineno) + ": times must increase", lineno, "t");
        trace.samples.push_back(s);
    }
    return trace;
}

}  // namespace pwave
