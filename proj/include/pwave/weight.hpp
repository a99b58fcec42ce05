#pragma once

#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pwave/domain.hpp"

namespace pwave {

/// phi(t) = (1 + k t)^gamma - 1.
struct PowerShift {
    double k;
    double gamma;
};

/// phi(t) = t.
struct Identity {};

/// Piecewise-linear phi through sorted (t, phi) knots starting at (0, 0).
struct TabulatedWeight {
    std::vector<std::pair<double, double>> samples;
};

/// phi'(t) = c L(t)^(-m) over a domain trajectory; phi by quadrature.
/// This is the growth-matched ansatz the admissibility conditions are
/// derived for.
struct DomainAnsatz {
    DomainTrajectory traj;
    double c;
    double m;
};

using WeightFamily = std::variant<PowerShift, Identity, TabulatedWeight, DomainAnsatz>;

/// Strictly increasing weight with phi(0) = 0.
class WeightFunction {
public:
    static WeightFunction power_shift(double k, double gamma);
    static WeightFunction identity();
    static WeightFunction tabulated(std::vector<std::pair<double, double>> samples);
    static WeightFunction domain_ansatz(DomainTrajectory traj, double c, double m);

    double value(double t) const;
    double d1(double t) const;
    double d2(double t) const;

    /// Throws ArgumentError if phi' <= 0 at any grid point.
    void require_increasing(std::span<const double> grid) const;

    const WeightFamily& family() const noexcept { return family_; }
    std::string name() const;

private:
    explicit WeightFunction(WeightFamily f) : family_(std::move(f)) {}

    WeightFamily family_;
};

}  // namespace pwave
