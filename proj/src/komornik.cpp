#include "pwave/komornik.hpp"

#include <algorithm>
#include <cmath>

#include "pwave/errors.hpp"

namespace pwave {

double DecayBound::operator()(double t) const
{
    const double ph = phi.value(t);
    if (q == 0.0) return E0 * std::exp(1.0 - A * ph);
    return E0 * std::pow((1.0 + q) / (1.0 + q * A * ph), 1.0 / q);
}

double DecayBound::log_value(double t) const
{
    const double ph = phi.value(t);
    if (q == 0.0) return std::log(E0) + 1.0 - A * ph;
    return std::log(E0) + std::log((1.0 + q) / (1.0 + q * A * ph)) / q;
}

DecayBound decay_bound(double E0, double q, double A, const WeightFunction& phi)
{
    if (!(E0 >= 0)) throw ArgumentError("decay bound needs E0 >= 0");
    if (!(q >= 0)) throw ArgumentError("decay bound needs q >= 0");
    if (!(A > 0)) throw ArgumentError("decay bound needs A > 0");
    return {E0, q, A, phi};
}

double verify_bound(const EnergyTrace& trace, const DecayBound& bound, double t_limit)
{
    double worst = 0.0;
    for (const auto& s : trace.samples) {
        if (s.t > t_limit) break;
        if (s.E <= 0.0) continue;
        const double log_b = bound.log_value(s.t);
        if (std::isnan(log_b) || log_b == -std::numeric_limits<double>::infinity())
            throw ArgumentError("decay bound must be positive where it is evaluated");
        worst = std::max(worst, std::exp(std::log(s.E) - log_b));
    }
    return worst;
}

KomornikReport estimate_A(const EnergyTrace& trace, const WeightFunction& phi, double q)
{
    if (!(q >= 0)) throw ArgumentError("inequality exponent q must be >= 0");
    if (trace.size() < 3) throw DegenerateTrace("Komornik estimate needs at least three samples");
    const double E0 = trace.front().E;
    if (!(E0 > 0)) throw DegenerateTrace("Komornik estimate needs E(0) > 0");

    if (const auto bad = monotonicity_violations(trace); !bad.empty()) {
        const auto& s = trace.samples[bad.front()];
        throw HypothesisViolation("energy increases beyond the residual budget at t = " + std::to_string(s.t),
                                  "nonincreasing");
    }

    const std::size_t n = trace.size();
    std::vector<double> times(n);
    for (std::size_t j = 0; j < n; ++j) times[j] = trace.samples[j].t;
    phi.require_increasing(times);

    std::vector<double> integrand(n);
    for (std::size_t j = 0; j < n; ++j)
        integrand[j] = std::pow(trace.samples[j].E, q + 1.0) * phi.d1(times[j]);

    // tail[j] = int_{t_j}^{T} E^(q+1) phi' dt
    std::vector<double> tail(n, 0.0);
    for (std::size_t j = n - 1; j-- > 0;)
        tail[j] = tail[j + 1] + 0.5 * (integrand[j] + integrand[j + 1]) * (times[j + 1] - times[j]);

    const std::size_t count = std::max<std::size_t>(1, (n * 4) / 5);
    const double E0q = std::pow(E0, q);

    KomornikReport r;
    r.q = q;
    r.A_hat = std::numeric_limits<double>::infinity();
    r.S_grid.assign(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(count));
    for (std::size_t j = 0; j < count; ++j) {
        if (tail[j] > 0) r.A_hat = std::min(r.A_hat, E0q * trace.samples[j].E / tail[j]);
    }
    if (!std::isfinite(r.A_hat) || !(r.A_hat > 0))
        throw DegenerateTrace("no start time S has a positive weighted tail integral");

    r.hypothesis_margins.resize(count);
    for (std::size_t j = 0; j < count; ++j)
        r.hypothesis_margins[j] = E0q * trace.samples[j].E / r.A_hat - tail[j];

    r.tail_fraction = trace.back().E / E0;
    r.tail_untrusted = r.tail_fraction > 0.01;
    r.bound_violation = verify_bound(trace, decay_bound(E0, q, r.A_hat, phi), r.S_grid.back());
    return r;
}

nlohmann::json to_json(const KomornikReport& r, bool include_grid)
{
    nlohmann::json j = {
        {"schema_version", "1"},
        {"q", r.q},
        {"A_hat", r.A_hat},
        {"tail_fraction", r.tail_fraction},
        {"tail_untrusted", r.tail_untrusted},
        {"bound_violation", r.bound_violation},
        {"S_count", r.S_grid.size()},
        {"S_first", r.S_grid.empty() ? 0.0 : r.S_grid.front()},
        {"S_last", r.S_grid.empty() ? 0.0 : r.S_grid.back()},
        {"min_hypothesis_margin",
         r.hypothesis_margins.empty() ? 0.0
                                      : *std::min_element(r.hypothesis_margins.begin(), r.hypothesis_margins.end())},
    };
    if (include_grid) {
        j["S_grid"] = r.S_grid;
        j["hypothesis_margins"] = r.hypothesis_margins;
    }
    return j;
}

}  // namespace pwave
