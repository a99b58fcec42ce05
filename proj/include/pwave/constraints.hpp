#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pwave/domain.hpp"
#include "pwave/weight.hpp"

namespace pwave {

/// Parameters of the decay estimate. beta and q_conj are derived from p.
struct ParameterSet {
    double p;
    double alpha;
    double m;
    double k;
    double gamma;

    double beta() const { return (p - 2.0) / p; }
    double q_conj() const { return p / (p - 1.0); }

    /// Checks p >= 2, gamma in (0, 1), k > 0, m > 0 and the alpha window:
    /// (1/p, 1/2 + 1/p) for p > 2, (1/2, 1) for p = 2. Throws ArgumentError.
    void validate() const;
};

/// Smallest admissible m for p > 2:
///   max{2, (1 - a) p / (a p - 1), ((1/2 + a) p - 1) / ((1/2 - a) p + 1)}.
/// Throws ArgumentError unless 1/p < alpha < 1/2 + 1/p. Returns +inf at the
/// open endpoints where a denominator vanishes.
double m_min(double p, double alpha);

/// The three expressions entering m_min, in order.
std::vector<double> m_min_terms(double p, double alpha);

/// Smallest admissible m for p = 2: max{2 (1 - a) / (2 a - 1), a / (1 - a), 2}.
/// Throws ArgumentError unless 1/2 < alpha < 1.
double m_min_p2(double alpha);

/// |beta / (1 - q/2) - (beta + 1)| with beta = (p - 2)/p, q = p/(p - 1).
double beta_identity_check(double p);

struct ConditionResult {
    std::string label;  // c417, c420, c424, c425, c428 or c430..c433
    double sup = 0.0;
    double tail_growth = 0.0;  // ratio(T) / ratio(T/10): > 1 means still growing
    double tail_slope = 0.0;   // d log ratio / d log(1 + t) over the final decade
    bool finite = true;
    bool diverging = false;    // strictly increasing over [T/2, T]
    bool satisfied = false;
    std::string error;         // set when phi' vanished on the grid
};

struct ConstraintReport {
    double m_min = 0.0;
    std::vector<double> term_values;
    std::vector<ConditionResult> conditions;

    bool all_satisfied() const;
    /// First condition that failed, or an empty string.
    std::string first_failure() const;
};

/// Sup over t_grid of each ratio the decay proof needs bounded:
///   p > 2: phi' L^2, phi'^2 L^(3-2/p), |phi''|^(a p) L^p / phi',
///          [|phi''|^((1-a) q) L^(1+q/2)]^(1/(1-q/2)) / phi', phi'^(1/(1-q/2)) L / phi'
///   p = 2: phi' L^2, phi'^2 L^2, |phi''|^(2a) L^2 / phi', |phi''|^(2(1-a)) L^2
/// with q = p/(p-1). A condition is satisfied when its sup is finite and it
/// does not grow (relative tolerance 1e-9) over the final decade [T/10, T].
ConstraintReport phi_condition_sups(const ParameterSet& params, const DomainTrajectory& traj,
                                    const WeightFunction& phi, std::span<const double> t_grid);

/// Default certification grid: 2000 points on [0, 1e4], log-spaced in 1 + t.
std::vector<double> certification_grid(double t_max = 1e4, std::size_t n = 2000);

/// Both certifications the command line reports.
struct Certification {
    ParameterSet params;
    double threshold = 0.0;  // m_min or m_min_p2
    /// PowerLaw(k, gamma, m) paired with phi = PowerShift(k, gamma).
    ConstraintReport theorem;
    /// Linear growth L = 1 + k t (|dL/dt| = k, the extremal bounded rate)
    /// paired with phi' = k gamma L^-m. Reproduces the threshold exponents.
    ConstraintReport ansatz;
    /// max |phi' L^m - k gamma| over the grid for the theorem pairing.
    double matching_defect = 0.0;

    /// m >= threshold up to a relative 1e-12, so decimal alpha inputs such as
    /// 0.6666666666666666 are not rejected by rounding.
    bool m_admissible() const;
    bool passed() const;
    std::string failure() const;
};

Certification certify(const ParameterSet& params, double t_max = 1e4, std::size_t n = 2000);

nlohmann::json to_json(const ConstraintReport& r);
nlohmann::json to_json(const Certification& c);

}  // namespace pwave
