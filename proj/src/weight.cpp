#include "pwave/weight.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pwave/errors.hpp"

namespace pwave {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t segment_of(const std::vector<std::pair<double, double>>& s, double t)
{
    auto it = std::upper_bound(s.begin(), s.end(), t,
                               [](double x, const auto& knot) { return x < knot.first; });
    auto j = static_cast<std::size_t>(std::distance(s.begin(), it));
    if (j == 0) return 0;
    return std::min(j - 1, s.size() - 2);
}

double segment_slope(const std::vector<std::pair<double, double>>& s, std::size_t j)
{
    return (s[j + 1].second - s[j].second) / (s[j + 1].first - s[j].first);
}

// Knot slope: mean of the adjacent segment slopes (one-sided at the ends).
double knot_slope(const std::vector<std::pair<double, double>>& s, std::size_t j)
{
    if (j == 0) return segment_slope(s, 0);
    if (j + 1 == s.size()) return segment_slope(s, j - 1);
    return 0.5 * (segment_slope(s, j - 1) + segment_slope(s, j));
}

// Composite Simpson with a fixed panel count; the integrand is smooth.
template <class F>
double simpson(F&& f, double a, double b, int panels = 512)
{
    if (b <= a) return 0.0;
    const double h = (b - a) / panels;
    double sum = f(a) + f(b);
    for (int i = 1; i < panels; ++i) sum += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    return sum * h / 3.0;
}

}  // namespace

WeightFunction WeightFunction::power_shift(double k, double gamma)
{
    if (!(k > 0)) throw ArgumentError("weight rate k must be > 0");
    if (!(gamma > 0 && gamma <= 1)) throw ArgumentError("weight exponent gamma must lie in (0, 1]");
    return WeightFunction(PowerShift{k, gamma});
}

WeightFunction WeightFunction::identity()
{
    return WeightFunction(Identity{});
}

WeightFunction WeightFunction::tabulated(std::vector<std::pair<double, double>> samples)
{
    if (samples.size() < 2) throw ArgumentError("tabulated weight needs at least two knots");
    if (samples.front().first != 0.0 || samples.front().second != 0.0)
        throw ArgumentError("tabulated weight must start at (0, 0)");
    for (std::size_t j = 1; j < samples.size(); ++j) {
        if (!(samples[j].first > samples[j - 1].first))
            throw ArgumentError("tabulated weight times must be strictly increasing");
        if (!(samples[j].second > samples[j - 1].second))
            throw ArgumentError("tabulated weight must be strictly increasing");
    }
    return WeightFunction(TabulatedWeight{std::move(samples)});
}

WeightFunction WeightFunction::domain_ansatz(DomainTrajectory traj, double c, double m)
{
    if (!(c > 0)) throw ArgumentError("ansatz scale c must be > 0");
    if (!std::isfinite(m)) throw ArgumentError("ansatz exponent m must be finite");
    return WeightFunction(DomainAnsatz{std::move(traj), c, m});
}

double WeightFunction::value(double t) const
{
    return std::visit(
        overloaded{
            [t](const PowerShift& f) { return std::pow(1.0 + f.k * t, f.gamma) - 1.0; },
            [t](const Identity&) { return t; },
            [t](const TabulatedWeight& f) {
                const auto j = segment_of(f.samples, t);
                return f.samples[j].second + segment_slope(f.samples, j) * (t - f.samples[j].first);
            },
            [t](const DomainAnsatz& f) {
                return simpson([&f](double s) { return f.c * std::pow(f.traj.length(s), -f.m); }, 0.0, t);
            },
        },
        family_);
}

double WeightFunction::d1(double t) const
{
    return std::visit(
        overloaded{
            [t](const PowerShift& f) { return f.k * f.gamma * std::pow(1.0 + f.k * t, f.gamma - 1.0); },
            [](const Identity&) { return 1.0; },
            [t](const TabulatedWeight& f) { return segment_slope(f.samples, segment_of(f.samples, t)); },
            [t](const DomainAnsatz& f) { return f.c * std::pow(f.traj.length(t), -f.m); },
        },
        family_);
}

double WeightFunction::d2(double t) const
{
    return std::visit(
        overloaded{
            [t](const PowerShift& f) {
                return f.k * f.k * f.gamma * (f.gamma - 1.0) * std::pow(1.0 + f.k * t, f.gamma - 2.0);
            },
            [](const Identity&) { return 0.0; },
            [t](const TabulatedWeight& f) {
                const auto j = segment_of(f.samples, t);
                return (knot_slope(f.samples, j + 1) - knot_slope(f.samples, j)) /
                       (f.samples[j + 1].first - f.samples[j].first);
            },
            [t](const DomainAnsatz& f) {
                const double L = f.traj.length(t);
                return -f.c * f.m * std::pow(L, -f.m - 1.0) * f.traj.length_rate(t);
            },
        },
        family_);
}

void WeightFunction::require_increasing(std::span<const double> grid) const
{
    for (double t : grid) {
        const double g = d1(t);
        if (!(g > 0.0)) {
            std::ostringstream os;
            os << "weight " << name() << " is not strictly increasing: phi'(" << t << ") = " << g;
            throw ArgumentError(os.str());
        }
    }
}

std::string WeightFunction::name() const
{
    return std::visit(overloaded{
                          [](const PowerShift&) { return std::string("powershift"); },
                          [](const Identity&) { return std::string("identity"); },
                          [](const TabulatedWeight&) { return std::string("tabulated"); },
                          [](const DomainAnsatz&) { return std::string("ansatz"); },
                      },
                      family_);
}

}  // namespace pwave
