#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pwave/state.hpp"

namespace pwave {

struct EnergySample {
    double t;
    double E;
    double D;
    double L;
    /// Identity defect over the interval ending at this sample:
    /// E(t_n) - E(t_{n-1}) + int D dt. Zero on the first sample.
    double residual;

    bool operator==(const EnergySample&) const = default;
};

struct EnergyTrace {
    std::vector<EnergySample> samples;

    bool empty() const { return samples.empty(); }
    std::size_t size() const { return samples.size(); }
    const EnergySample& front() const { return samples.front(); }
    const EnergySample& back() const { return samples.back(); }

    bool operator==(const EnergyTrace&) const = default;
};

/// E = (1/2) ||u_t||_2^2 + (1/p) ||u_x||_p^p, evaluated in reference coordinates:
/// (1/2) L int w^2 dy + (1/p) L^(1-p) int |v_y|^p dy.
double energy(const ReferenceState& s);

/// D = int |d_x u_t|^2 dx = L^(-1) int w_y^2 dy.
double dissipation(const ReferenceState& s);

/// One sample per state; residual_n = E_n - E_{n-1} + (D_{n-1} + D_n)/2 (t_n - t_{n-1}).
/// Throws ArgumentError for fewer than two states or non-increasing times.
EnergyTrace identity_residuals(std::span<const ReferenceState> states);

/// Indices n >= 1 where E_n > E_{n-1} + |residual_n| + rel_budget * E_0.
std::vector<std::size_t> monotonicity_violations(const EnergyTrace& trace, double rel_budget = 1e-12);

/// Maximum of |residual_n| over the trace.
double max_abs_residual(const EnergyTrace& trace);
/// Sum of |residual_n| over the trace.
double total_abs_residual(const EnergyTrace& trace);

/// Writes "t,E,D,L,residual" (plus ",bound" when `bound` is given, one value
/// per sample) with 17 significant digits.
void write_trace_csv(std::ostream& out, const EnergyTrace& trace,
                     const std::vector<double>* bound = nullptr);

/// Parses a trace written by write_trace_csv. Throws ParseError with the
/// offending line on malformed input or unordered times.
EnergyTrace read_trace_csv(std::istream& in);

/// Round-trip float formatting shared by the CSV and report writers.
std::string format_double(double x);

}  // namespace pwave
