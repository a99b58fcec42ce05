#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "pwave/energy.hpp"

namespace pwave {

enum class EnvelopeKind {
    PolyInPhi,  // p > 2, expanding domain
    ExpInPhi,   // p = 2, expanding domain
    PolyInT,    // p > 2, bounded domain
    ExpInT,     // p = 2, bounded domain
};

std::string to_string(EnvelopeKind kind);
/// Accepts poly_phi, exp_phi, poly_t, exp_t. Throws ArgumentError otherwise.
EnvelopeKind envelope_kind_from_string(const std::string& s);

/// Closed-form decay envelopes, phi(t) = (1 + k t)^gamma - 1:
///   PolyInPhi: [C (1 + b) (E0^b + 1) / b]^(1/b) phi(t)^(-1/b)
///   ExpInPhi:  E0 exp(1 - phi(t) / C)
///   PolyInT:   E0 ((1 + b) / (1 + b A t))^(1/b)
///   ExpInT:    E0 exp(1 - t / C)
/// with b = beta = (p - 2)/p.
struct DecayEnvelope {
    EnvelopeKind kind = EnvelopeKind::ExpInT;
    double E0 = 1.0;
    double C = 1.0;
    double A = 1.0;
    double beta = 0.0;
    double k = 1.0;
    double gamma = 0.5;

    // Filled by fit().
    double t_lo = 0.0;
    double t_hi = 0.0;
    double slope = 0.0;      // regression slope of log E
    double intercept = 0.0;  // regression intercept of log E
    double r_squared = 0.0;

    double phi(double t) const;
};

/// Envelope value at t; PolyInPhi at t = 0 returns +inf.
double eval_envelope(const DecayEnvelope& env, double t);

struct FitParams {
    double k = 1.0;
    double gamma = 0.5;
    double p = 2.0;
    std::optional<double> t_lo;  // default t_end / 4
    std::optional<double> t_hi;  // default t_end
};

/// Least-squares fit of log E over the window against phi (ExpInPhi), t
/// (ExpInT), log phi (PolyInPhi) or log(1 + t) (PolyInT); slope and R^2 are
/// recorded. The free constant is then raised until the envelope touches the
/// trace from above on the window: exponential kinds set C = -1/slope and fit
/// E0; polynomial kinds keep the rate -1/beta, take E0 = E(first sample) and
/// fit C (PolyInPhi) or A (PolyInT).
///
/// Throws ArgumentError for fewer than 20 samples in the window and
/// DegenerateFit for nonpositive energies or a non-decaying exponential fit.
DecayEnvelope fit(const EnergyTrace& trace, EnvelopeKind kind, const FitParams& params);

/// max over the fit window of E(t) / eval_envelope(t).
double verify_envelope(const EnergyTrace& trace, const DecayEnvelope& env);

nlohmann::json to_json(const DecayEnvelope& env);

}  // namespace pwave
