#pragma once

#include <limits>
#include <vector>

#include <json.hpp>

#include "pwave/energy.hpp"
#include "pwave/weight.hpp"

namespace pwave {

/// Guaranteed decay from the integral inequality
///   int_S^inf E^(q+1) phi' dt <= (1/A) E(0)^q E(S):
///   q > 0: E(t) <= E0 ((1 + q) / (1 + q A phi(t)))^(1/q)
///   q = 0: E(t) <= E0 exp(1 - A phi(t))
struct DecayBound {
    double E0;
    double q;
    double A;
    WeightFunction phi;

    double operator()(double t) const;
    /// log of the bound; stays finite where the bound itself underflows.
    double log_value(double t) const;
};

struct KomornikReport {
    double q = 0.0;  // inequality exponent (not the Hoelder conjugate)
    double A_hat = 0.0;
    std::vector<double> S_grid;
    /// (1/A_hat) E(0)^q E(S) - int_S^T E^(q+1) phi' dt, one per S.
    std::vector<double> hypothesis_margins;
    double tail_fraction = 0.0;  // E(T) / E(0)
    bool tail_untrusted = false;  // tail_fraction > 0.01
    double bound_violation = 0.0;  // max E(t) / bound(t) over the S_grid range
};

/// Smallest A for which the truncated inequality (upper limit T = last sample)
/// holds at every S in the first 80% of the sample times; integrals by the
/// trapezoid rule.
///
/// Throws DegenerateTrace when E(0) <= 0 or no integral is positive, and
/// HypothesisViolation("nonincreasing") when E rises beyond the residual
/// budget |residual_n| + 1e-12 E(0).
KomornikReport estimate_A(const EnergyTrace& trace, const WeightFunction& phi, double q);

DecayBound decay_bound(double E0, double q, double A, const WeightFunction& phi);

/// max over samples with t <= t_limit of E(t) / bound(t).
double verify_bound(const EnergyTrace& trace, const DecayBound& bound,
                    double t_limit = std::numeric_limits<double>::infinity());

nlohmann::json to_json(const KomornikReport& r, bool include_grid = false);

}  // namespace pwave
