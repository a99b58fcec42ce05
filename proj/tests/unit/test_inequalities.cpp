#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "pwave/inequalities.hpp"
#include "pwave/solver.hpp"
#include "support/oracles.hpp"

using namespace pwave;
using oracle::kPi;

namespace {

ReferenceState sampled(Eigen::Index N, double L, double p, const std::function<double(double)>& g)
{
    ReferenceState s = ReferenceState::zero(N, 0.0, L, p);
    for (Eigen::Index i = 1; i <= N; ++i) s.v(i) = g(static_cast<double>(i) / static_cast<double>(N + 1));
    return s;
}

}  // namespace

TEST(Embeddings, ZeroStateHasZeroMargins)
{
    const auto r = check_embeddings(ReferenceState::zero(20, 0.0, 3.0, 4.0));
    EXPECT_EQ(r.margin1(), 0.0);
    EXPECT_EQ(r.margin2(), 0.0);
    EXPECT_EQ(r.margin3(), 0.0);
    EXPECT_FALSE(r.any_violated());
}

TEST(Embeddings, HoelderIsEqualityAtPEqualsTwo)
{
    const auto r = check_embeddings(sampled(100, 2.5, 2.0, [](double y) { return std::sin(kPi * y); }));
    EXPECT_NEAR(r.margin1(), 0.0, 1e-14 * r.rhs1);
    EXPECT_FALSE(r.any_violated());
}

TEST(Embeddings, HoelderSharpForConstantSlopeMagnitude)
{
    // Tent with its peak on a node: |u_x| is constant.
    const auto r = check_embeddings(sampled(99, 1.7, 4.0, [](double y) { return 1.0 - std::abs(2.0 * y - 1.0); }));
    EXPECT_NEAR(r.margin1(), 0.0, 1e-12 * r.rhs1);
}

TEST(Embeddings, AllMarginsNonNegativeOnSimulatedStates)
{
    SolverConfig c;
    c.p = 4.0;
    c.traj = DomainTrajectory::power_law(1.0, 0.5, 3.0, 5.0);
    c.N = 60;
    c.dt = 0.02;
    c.t_end = 5.0;
    c.state_every = 10;
    c.initial_profile = InitialShape::bump(2.0);
    c.initial_velocity = InitialShape::sine(3);
    for (const auto& s : simulate(c).states) {
        const auto r = check_embeddings(s);
        EXPECT_FALSE(r.any_violated()) << "t = " << s.t;
        EXPECT_GE(r.lhs1, 0.0);
        EXPECT_GE(r.lhs2, 0.0);
    }
}

TEST(Embeddings, ViolationIsDetected)
{
    EmbeddingReport r;
    r.lhs3 = 2.0;
    r.rhs3 = 1.0;
    EXPECT_TRUE(r.violated3());
    EXPECT_TRUE(r.any_violated());
    r.lhs3 = 1.0 + 1e-10;
    EXPECT_FALSE(r.violated3());
}

TEST(Embeddings, AgreesWithSimpsonOracle)
{
    const double L = 2.0, p = 4.0;
    auto g = [](double y) { return std::sin(kPi * y); };
    auto dg = [](double y) { return kPi * std::cos(kPi * y); };
    const auto ref = oracle::simpson_norms(g, dg, L, p);
    const auto r = check_embeddings(sampled(3999, L, p, g));
    EXPECT_NEAR(r.lhs1 / ref.grad_l2_sq, 1.0, 1e-6);
    EXPECT_NEAR(r.lhs3 / ref.u_l2_sq, 1.0, 1e-6);
    const double ref_rhs2 = std::pow(L, 3.0 - 2.0 / p) * ref.grad_lp * ref.grad_lp;
    EXPECT_NEAR(r.rhs2 / ref_rhs2, 1.0, 1e-6);
}

TEST(Embeddings, JsonCarriesMargins)
{
    const auto j = to_json(check_embeddings(sampled(20, 1.0, 3.0, [](double y) { return y * (1 - y); })));
    EXPECT_TRUE(j.contains("margin1"));
    EXPECT_TRUE(j.contains("margin3"));
    EXPECT_FALSE(j["violated"].get<bool>());
}
