#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "pwave/domain.hpp"
#include "pwave/envelope.hpp"
#include "pwave/errors.hpp"

using namespace pwave;

namespace {

EnergyTrace synthetic(const std::vector<double>& times, const std::function<double(double)>& E)
{
    EnergyTrace tr;
    for (double t : times) tr.samples.push_back({t, E(t), 0.0, 1.0, 0.0});
    return tr;
}

DecayEnvelope envelope(EnvelopeKind kind, double beta)
{
    DecayEnvelope env;
    env.kind = kind;
    env.E0 = 2.0;
    env.C = 1.0;
    env.A = 1.0;
    env.beta = beta;
    env.k = 1.0;
    env.gamma = 0.5;
    return env;
}

}  // namespace

TEST(EvalEnvelope, Examples)
{
    EXPECT_NEAR(eval_envelope(envelope(EnvelopeKind::ExpInT, 0.0), 0.0), 2.0 * std::exp(1.0), 1e-14);
    EXPECT_NEAR(eval_envelope(envelope(EnvelopeKind::ExpInPhi, 0.0), 3.0), 2.0, 1e-14);
    EXPECT_NEAR(eval_envelope(envelope(EnvelopeKind::PolyInT, 0.5), 6.0), 0.140625 * 2.0, 1e-14);
    EXPECT_EQ(eval_envelope(envelope(EnvelopeKind::PolyInPhi, 0.5), 0.0), INFINITY);
    // [C (1 + b)(E0^b + 1) / b]^(1/b) phi^(-1/b) at phi = 1.
    const double pref = std::pow(1.0 * 1.5 * (std::sqrt(2.0) + 1.0) / 0.5, 2.0);
    EXPECT_NEAR(eval_envelope(envelope(EnvelopeKind::PolyInPhi, 0.5), 3.0), pref, 1e-12);
}

TEST(EvalEnvelope, StrictlyDecreasing)
{
    for (auto [kind, beta] : {std::pair{EnvelopeKind::ExpInT, 0.0}, std::pair{EnvelopeKind::ExpInPhi, 0.0},
                              std::pair{EnvelopeKind::PolyInT, 0.5}, std::pair{EnvelopeKind::PolyInPhi, 0.5}}) {
        const auto env = envelope(kind, beta);
        const auto grid = uniform_grid(0.01, 30.0, 500);
        for (std::size_t i = 1; i < grid.size(); ++i)
            EXPECT_LT(eval_envelope(env, grid[i]), eval_envelope(env, grid[i - 1])) << to_string(kind);
    }
}

TEST(EvalEnvelope, NegativeTimeThrows)
{
    EXPECT_THROW(eval_envelope(envelope(EnvelopeKind::ExpInT, 0.0), -1.0), DomainError);
}

TEST(Fit, ExponentialInTime)
{
    const auto tr = synthetic(uniform_grid(0.0, 8.0, 401), [](double t) { return 2.0 * std::exp(-3.0 * t); });
    FitParams fp;
    const auto env = fit(tr, EnvelopeKind::ExpInT, fp);
    EXPECT_NEAR(env.slope, -3.0, 1e-10);
    EXPECT_NEAR(env.C, 1.0 / 3.0, 1e-10);
    EXPECT_NEAR(env.r_squared, 1.0, 1e-10);
    EXPECT_DOUBLE_EQ(env.t_lo, 2.0);
    EXPECT_DOUBLE_EQ(env.t_hi, 8.0);
    EXPECT_NEAR(verify_envelope(tr, env), 1.0, 1e-9);
}

TEST(Fit, ExponentialInWeight)
{
    const auto tr = synthetic(uniform_grid(0.0, 100.0, 1001), [](double t) { return std::exp(-0.7 * (std::sqrt(1 + t) - 1)); });
    const auto env = fit(tr, EnvelopeKind::ExpInPhi, {});
    EXPECT_NEAR(env.slope, -0.7, 1e-10);
    EXPECT_NEAR(env.r_squared, 1.0, 1e-10);
    EXPECT_LE(verify_envelope(tr, env), 1.0 + 1e-9);
}

TEST(Fit, AlgebraicInTime)
{
    const auto tr = synthetic(uniform_grid(0.0, 200.0, 2001), [](double t) { return std::pow(1.0 + t, -2.0); });
    FitParams fp;
    fp.p = 4.0;
    const auto env = fit(tr, EnvelopeKind::PolyInT, fp);
    EXPECT_NEAR(env.slope, -2.0, 1e-10);
    EXPECT_NEAR(env.r_squared, 1.0, 1e-10);
    EXPECT_DOUBLE_EQ(env.beta, 0.5);
    EXPECT_LE(verify_envelope(tr, env), 1.0 + 1e-6);
}

TEST(Fit, AlgebraicInWeight)
{
    const auto tr = synthetic(uniform_grid(0.0, 400.0, 2001), [](double t) {
        const double phi = std::sqrt(1 + t) - 1;
        return t == 0 ? 1.0 : std::min(1.0, 0.3 * std::pow(phi, -2.0));
    });
    FitParams fp;
    fp.p = 4.0;
    const auto env = fit(tr, EnvelopeKind::PolyInPhi, fp);
    EXPECT_NEAR(env.slope, -2.0, 1e-8);
    EXPECT_LE(verify_envelope(tr, env), 1.0 + 1e-6);
    EXPECT_NEAR(verify_envelope(tr, env), 1.0, 1e-9);
}

TEST(Fit, DominanceFailsOutsideWindow)
{
    const auto tr = synthetic(uniform_grid(0.0, 100.0, 1001), [](double t) { return std::pow(1.0 + t, -2.0); });
    FitParams fp;
    fp.t_lo = 0.0;
    fp.t_hi = 5.0;
    auto env = fit(tr, EnvelopeKind::ExpInT, fp);
    EXPECT_LE(verify_envelope(tr, env), 1.0 + 1e-6);
    env.t_hi = 100.0;
    EXPECT_GT(verify_envelope(tr, env), 1.0);
}

TEST(Fit, Errors)
{
    const auto few = synthetic(uniform_grid(0.0, 1.0, 15), [](double t) { return std::exp(-t); });
    EXPECT_THROW(fit(few, EnvelopeKind::ExpInT, {}), ArgumentError);

    const auto zeros = synthetic(uniform_grid(0.0, 1.0, 200), [](double) { return 0.0; });
    EXPECT_THROW(fit(zeros, EnvelopeKind::ExpInT, {}), DegenerateFit);

    const auto growing = synthetic(uniform_grid(0.0, 1.0, 200), [](double t) { return std::exp(t); });
    EXPECT_THROW(fit(growing, EnvelopeKind::ExpInT, {}), DegenerateFit);
}

TEST(EnvelopeKind, StringRoundTrip)
{
    for (auto k : {EnvelopeKind::PolyInPhi, EnvelopeKind::ExpInPhi, EnvelopeKind::PolyInT, EnvelopeKind::ExpInT})
        EXPECT_EQ(envelope_kind_from_string(to_string(k)), k);
    EXPECT_EQ(to_string(EnvelopeKind::PolyInPhi), "poly_phi");
    EXPECT_THROW(envelope_kind_from_string("linear"), ArgumentError);
}

TEST(EnvelopeJson, Fields)
{
    const auto tr = synthetic(uniform_grid(0.0, 8.0, 401), [](double t) { return std::exp(-t); });
    const auto j = to_json(fit(tr, EnvelopeKind::ExpInT, {}));
    EXPECT_EQ(j["schema_version"], "1");
    EXPECT_EQ(j["kind"], "exp_t");
    EXPECT_TRUE(j.contains("r_squared"));
    EXPECT_TRUE(j.contains("fit_window"));
}
