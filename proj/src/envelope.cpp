#include "pwave/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/QR>

#include "pwave/errors.hpp"

namespace pwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_envelope(const DecayEnvelope& env, double t)
{
    const double b = env.beta;
    switch (env.kind) {
    case EnvelopeKind::PolyInPhi: {
        const double ph = env.phi(t);
        if (ph <= 0) return kInf;
        const double prefactor = env.C * (1.0 + b) * (std::pow(env.E0, b) + 1.0) / b;
        return (std::log(prefactor) - std::log(ph)) / b;
    }
    case EnvelopeKind::ExpInPhi:
        return std::log(env.E0) + 1.0 - env.phi(t) / env.C;
    case EnvelopeKind::PolyInT:
        return std::log(env.E0) + std::log((1.0 + b) / (1.0 + b * env.A * t)) / b;
    case EnvelopeKind::ExpInT:
        return std::log(env.E0) + 1.0 - t / env.C;
    }
    return kInf;
}

struct LineFit {
    double intercept;
    double slope;
    double r_squared;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd design(n, 2);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        design(i, 1) = x[static_cast<std::size_t>(i)];
        rhs(i) = y[static_cast<std::size_t>(i)];
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < 2) throw DegenerateFit("regression abscissa is constant over the fit window");
    const Eigen::Vector2d coef = qr.solve(rhs);
    const double ss_res = (design * coef - rhs).squaredNorm();
    const double ss_tot = (rhs.array() - rhs.mean()).square().sum();
    const double r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : (ss_res == 0 ? 1.0 : 0.0);
    return {coef(0), coef(1), r2};
}

}  // namespace

std::string to_string(EnvelopeKind kind)
{
    switch (kind) {
    case EnvelopeKind::PolyInPhi: return "poly_phi";
    case EnvelopeKind::ExpInPhi: return "exp_phi";
    case EnvelopeKind::PolyInT: return "poly_t";
    case EnvelopeKind::ExpInT: return "exp_t";
    }
    return "unknown";
}

EnvelopeKind envelope_kind_from_string(const std::string& s)
{
    if (s == "poly_phi") return EnvelopeKind::PolyInPhi;
    if (s == "exp_phi") return EnvelopeKind::ExpInPhi;
    if (s == "poly_t") return EnvelopeKind::PolyInT;
    if (s == "exp_t") return EnvelopeKind::ExpInT;
    throw ArgumentError("unknown envelope kind '" + s + "' (expected poly_phi, exp_phi, poly_t or exp_t)");
}

double DecayEnvelope::phi(double t) const
{
    return std::pow(1.0 + k * t, gamma) - 1.0;
}

double eval_envelope(const DecayEnvelope& env, double t)
{
    if (!(t >= 0)) throw DomainError("envelope evaluated at negative time");
    const double lv = log_envelope(env, t);
    return lv == kInf ? kInf : std::exp(lv);
}

DecayEnvelope fit(const EnergyTrace& trace, EnvelopeKind kind, const FitParams& params)
{
    if (trace.empty()) throw ArgumentError("cannot fit an empty trace");
    const double t_end = trace.back().t;

    DecayEnvelope env;
    env.kind = kind;
    env.k = params.k;
    env.gamma = params.gamma;
    env.beta = (params.p - 2.0) / params.p;
    env.t_lo = params.t_lo.value_or(t_end / 4.0);
    env.t_hi = params.t_hi.value_or(t_end);

    const bool poly = kind == EnvelopeKind::PolyInPhi || kind == EnvelopeKind::PolyInT;
    if (poly && !(env.beta > 0)) throw ArgumentError("polynomial envelopes need p > 2");

    std::vector<double> ts, x, y;
    for (const auto& s : trace.samples) {
        if (s.t < env.t_lo || s.t > env.t_hi) continue;
        if (!(s.E > 0)) throw DegenerateFit("nonpositive energy inside the fit window at t = " + std::to_string(s.t));
        double xi = 0.0;
        switch (kind) {
        case EnvelopeKind::PolyInPhi: xi = std::log(env.phi(s.t)); break;
        case EnvelopeKind::ExpInPhi: xi = env.phi(s.t); break;
        case EnvelopeKind::PolyInT: xi = std::log1p(s.t); break;
        case EnvelopeKind::ExpInT: xi = s.t; break;
        }
        if (!std::isfinite(xi)) continue;  // log phi at t = 0
        ts.push_back(s.t);
        x.push_back(xi);
        y.push_back(std::log(s.E));
    }
    if (ts.size() < 20) throw ArgumentError("fit window holds fewer than 20 usable samples");

    const LineFit line = least_squares(x, y);
    env.slope = line.slope;
    env.intercept = line.intercept;
    env.r_squared = line.r_squared;

    const double b = env.beta;
    switch (kind) {
    case EnvelopeKind::ExpInPhi:
    case EnvelopeKind::ExpInT: {
        if (!(line.slope < 0)) throw DegenerateFit("energy does not decay over the fit window");
        env.C = -1.0 / line.slope;
        double top = -kInf;
        for (std::size_t i = 0; i < x.size(); ++i) top = std::max(top, y[i] - line.slope * x[i]);
        env.E0 = std::exp(top - 1.0);
        break;
    }
    case EnvelopeKind::PolyInPhi: {
        env.E0 = trace.front().E;
        double log_prefactor = -kInf;  // log max E phi^(1/b)
        for (std::size_t i = 0; i < x.size(); ++i) log_prefactor = std::max(log_prefactor, y[i] + x[i] / b);
        env.C = b * std::exp(b * log_prefactor) / ((1.0 + b) * (std::pow(env.E0, b) + 1.0));
        break;
    }
    case EnvelopeKind::PolyInT: {
        env.E0 = trace.front().E;
        double A = kInf;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double t = ts[i];
            if (t <= 0) continue;
            const double ratio = std::exp(b * (std::log(env.E0) - y[i]));
            A = std::min(A, ((1.0 + b) * ratio - 1.0) / (b * t));
        }
        if (!(A > 0) || !std::isfinite(A)) throw DegenerateFit("no positive constant A dominates the trace");
        env.A = A;
        break;
    }
    }
    return env;
}

double verify_envelope(const EnergyTrace& trace, const DecayEnvelope& env)
{
    double worst = 0.0;
    for (const auto& s : trace.samples) {
        if (s.t < env.t_lo || s.t > env.t_hi || s.E <= 0) continue;
        const double lv = log_envelope(env, s.t);
        if (lv == kInf) continue;
        worst = std::max(worst, std::exp(std::log(s.E) - lv));
    }
    return worst;
}

nlohmann::json to_json(const DecayEnvelope& env)
{
    return {
        {"schema_version", "1"},
        {"kind", to_string(env.kind)},
        {"E0", env.E0},
        {"C", env.C},
        {"A", env.A},
        {"beta", env.beta},
        {"k", env.k},
        {"gamma", env.gamma},
        {"fit_window", {env.t_lo, env.t_hi}},
        {"slope", env.slope},
        {"intercept", env.intercept},
        {"r_squared", env.r_squared},
    };
}

}  // namespace pwave
