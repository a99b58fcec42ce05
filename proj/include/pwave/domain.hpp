#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pwave {

/// L(t) = (1 + k t)^((1 - gamma) / m), the expanding family with L(0) = 1.
struct PowerLaw {
    double k;
    double gamma;
    double m;
};

struct Constant {
    double L0;
};

/// Monotone piecewise-linear L(t) through sorted (t, L) knots.
struct Tabulated {
    std::vector<std::pair<double, double>> samples;
};

/// L(t) = (1 + k t)^a with a free growth exponent. Covers trajectories the
/// decay theory does not reach (a > 1/2).
struct Growth {
    double k;
    double a;
};

using DomainFamily = std::variant<PowerLaw, Constant, Tabulated, Growth>;

/// The moving interval Omega_t = (0, L(t)), left endpoint pinned at 0.
///
/// L is positive and nondecreasing on [0, t_max]; construction rejects
/// parameters that would break either property. Immutable once built.
class DomainTrajectory {
public:
    static DomainTrajectory power_law(double k, double gamma, double m, double t_max);
    static DomainTrajectory constant(double L0, double t_max);
    static DomainTrajectory tabulated(std::vector<std::pair<double, double>> samples);
    static DomainTrajectory growth(double k, double a, double t_max);

    /// L(t). Throws DomainError outside [0, t_max].
    double length(double t) const;
    /// dL/dt. Tabulated trajectories return the slope of the segment containing t
    /// (the right-hand segment at interior knots).
    double length_rate(double t) const;
    /// sup |dL/dt| over a uniform grid of `grid_points` on [0, t_max]; exact
    /// segment maximum for tabulated data.
    double rate_bound(std::size_t grid_points = 10001) const;

    /// Exponent e in L ~ (1 + k t)^e for the power families, 0 for Constant,
    /// and the log-log slope of the last segment for Tabulated.
    double growth_exponent() const;
    /// True when the trajectory grows faster than the decay theory covers.
    bool outside_theory() const;

    double t_max() const noexcept { return t_max_; }
    const DomainFamily& family() const noexcept { return family_; }
    std::string family_name() const;

private:
    DomainTrajectory(DomainFamily family, double t_max);
    void check_time(double t) const;

    DomainFamily family_;
    double t_max_;
};

/// Uniform grid of n points on [a, b] (endpoints included).
std::vector<double> uniform_grid(double a, double b, std::size_t n);

/// n points on [0, t_max] spaced uniformly in log(1 + t).
std::vector<double> log1p_grid(double t_max, std::size_t n);

}  // namespace pwave
