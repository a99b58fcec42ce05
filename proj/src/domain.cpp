#include "pwave/domain.hpp"

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

void require(bool ok, const std::string& msg)
{
    if (!ok) throw ArgumentError(msg);
}

// Index of the segment [t_j, t_{j+1}] containing t; interior knots go right.
std::size_t segment_of(const Tabulated& tab, double t)
{
    const auto& s = tab.samples;
    auto it = std::upper_bound(s.begin(), s.end(), t,
                               [](double x, const auto& knot) { return x < knot.first; });
    auto j = static_cast<std::size_t>(std::distance(s.begin(), it));
    if (j == 0) return 0;
    return std::min(j - 1, s.size() - 2);
}

}  // namespace

DomainTrajectory::DomainTrajectory(DomainFamily family, double t_max)
    : family_(std::move(family)), t_max_(t_max)
{
}

DomainTrajectory DomainTrajectory::power_law(double k, double gamma, double m, double t_max)
{
    require(std::isfinite(k) && k > 0, "power-law rate k must be > 0");
    require(gamma > 0 && gamma < 1, "power-law gamma must lie in (0, 1)");
    require(std::isfinite(m) && m >= 2, "power-law exponent m must be >= 2");
    require(std::isfinite(t_max) && t_max > 0, "t_max must be > 0");
    return DomainTrajectory(PowerLaw{k, gamma, m}, t_max);
}

DomainTrajectory DomainTrajectory::constant(double L0, double t_max)
{
    require(std::isfinite(L0) && L0 > 0, "constant length L0 must be > 0");
    require(std::isfinite(t_max) && t_max > 0, "t_max must be > 0");
    return DomainTrajectory(Constant{L0}, t_max);
}

DomainTrajectory DomainTrajectory::tabulated(std::vector<std::pair<double, double>> samples)
{
    require(samples.size() >= 2, "tabulated trajectory needs at least two (t, L) samples");
    require(samples.front().first == 0.0, "tabulated trajectory must start at t = 0");
    for (std::size_t j = 0; j < samples.size(); ++j) {
        const auto [t, L] = samples[j];
        require(std::isfinite(t) && std::isfinite(L), "tabulated samples must be finite");
        require(L > 0, "tabulated lengths must be > 0");
        if (j > 0) {
            require(t > samples[j - 1].first, "tabulated times must be strictly increasing");
            require(L >= samples[j - 1].second,
                    "tabulated lengths must be nondecreasing (the domain may not shrink)");
        }
    }
    const double t_max = samples.back().first;
    return DomainTrajectory(Tabulated{std::move(samples)}, t_max);
}

DomainTrajectory DomainTrajectory::growth(double k, double a, double t_max)
{
    require(std::isfinite(k) && k > 0, "growth rate k must be > 0");
    require(std::isfinite(a) && a >= 0, "growth exponent must be >= 0");
    require(std::isfinite(t_max) && t_max > 0, "t_max must be > 0");
    return DomainTrajectory(Growth{k, a}, t_max);
}

void DomainTrajectory::check_time(double t) const
{
    if (!(t >= 0.0 && t <= t_max_)) {
        std::ostringstream os;
        os << "time " << t << " outside trajectory range [0, " << t_max_ << "]";
        throw DomainError(os.str());
    }
}

double DomainTrajectory::length(double t) const
{
    check_time(t);
    return std::visit(
        overloaded{
            [t](const PowerLaw& f) { return std::pow(1.0 + f.k * t, (1.0 - f.gamma) / f.m); },
            [](const Constant& f) { return f.L0; },
            [t](const Tabulated& f) {
                const std::size_t j = segment_of(f, t);
                const auto [t0, L0] = f.samples[j];
                const auto [t1, L1] = f.samples[j + 1];
                return L0 + (L1 - L0) * (t - t0) / (t1 - t0);
            },
            [t](const Growth& f) { return std::pow(1.0 + f.k * t, f.a); },
        },
        family_);
}

double DomainTrajectory::length_rate(double t) const
{
    check_time(t);
    return std::visit(
        overloaded{
            [t](const PowerLaw& f) {
                const double e = (1.0 - f.gamma) / f.m;
                return f.k * e * std::pow(1.0 + f.k * t, e - 1.0);
            },
            [](const Constant&) { return 0.0; },
            [t](const Tabulated& f) {
                const std::size_t j = segment_of(f, t);
                const auto [t0, L0] = f.samples[j];
                const auto [t1, L1] = f.samples[j + 1];
                return (L1 - L0) / (t1 - t0);
            },
            [t](const Growth& f) { return f.k * f.a * std::pow(1.0 + f.k * t, f.a - 1.0); },
        },
        family_);
}

double DomainTrajectory::rate_bound(std::size_t grid_points) const
{
    if (const auto* tab = std::get_if<Tabulated>(&family_)) {
        double best = 0.0;
        for (std::size_t j = 0; j + 1 < tab->samples.size(); ++j) {
            const auto [t0, L0] = tab->samples[j];
            const auto [t1, L1] = tab->samples[j + 1];
            best = std::max(best, std::abs((L1 - L0) / (t1 - t0)));
        }
        return best;
    }
    double best = 0.0;
    for (double t : uniform_grid(0.0, t_max_, std::max<std::size_t>(grid_points, 2)))
        best = std::max(best, std::abs(length_rate(t)));
    return best;
}

double DomainTrajectory::growth_exponent() const
{
    return std::visit(
        overloaded{
            [](const PowerLaw& f) { return (1.0 - f.gamma) / f.m; },
            [](const Constant&) { return 0.0; },
            [](const Tabulated& f) {
                const auto& s = f.samples;
                const auto [t0, L0] = s[s.size() - 2];
                const auto [t1, L1] = s.back();
                return (std::log(L1) - std::log(L0)) / (std::log1p(t1) - std::log1p(t0));
            },
            [](const Growth& f) { return f.a; },
        },
        family_);
}

bool DomainTrajectory::outside_theory() const
{
    return growth_exponent() > 0.5;
}

std::string DomainTrajectory::family_name() const
{
    return std::visit(overloaded{
                          [](const PowerLaw&) { return std::string("powerlaw"); },
                          [](const Constant&) { return std::string("constant"); },
                          [](const Tabulated&) { return std::string("tabulated"); },
                          [](const Growth&) { return std::string("growth"); },
                      },
                      family_);
}

std::vector<double> uniform_grid(double a, double b, std::size_t n)
{
    if (n < 2) throw ArgumentError("grid needs at least two points");
    std::vector<double> g(n);
    const double step = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = a + step * static_cast<double>(i);
    g.back() = b;
    return g;
}

std::vector<double> log1p_grid(double t_max, std::size_t n)
{
    if (n < 2) throw ArgumentError("grid needs at least two points");
    if (!(t_max > 0)) throw ArgumentError("log grid needs t_max > 0");
    std::vector<double> g(n);
    const double top = std::log1p(t_max);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = std::expm1(top * static_cast<double>(i) / static_cast<double>(n - 1));
    g.front() = 0.0;
    g.back() = t_max;
    return g;
}

}  // namespace pwave
