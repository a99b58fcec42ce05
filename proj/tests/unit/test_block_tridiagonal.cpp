#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "pwave/block_tridiagonal.hpp"

using namespace pwave;

namespace {

template <int B>
void check_against_dense_lu(std::size_t n, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    using Block = typename BlockTridiagonal<double, B>::Block;
    auto random_block = [&] { return Block::NullaryExpr([&] { return u(rng); }).eval(); };

    BlockTridiagonal<double, B> sys(n);
    for (std::size_t i = 0; i < n; ++i) {
        sys.diag[i] = random_block() + 6.0 * Block::Identity();
        if (i > 0) sys.lower[i] = random_block();
        if (i + 1 < n) sys.upper[i] = random_block();
    }
    const Eigen::Index dim = static_cast<Eigen::Index>(n * B);
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = static_cast<Eigen::Index>(i * B);
        dense.block<B, B>(r, r) = sys.diag[i];
        if (i > 0) dense.block<B, B>(r, r - B) = sys.lower[i];
        if (i + 1 < n) dense.block<B, B>(r, r + B) = sys.upper[i];
    }
    const Eigen::VectorXd rhs = Eigen::VectorXd::NullaryExpr(dim, [&] { return u(rng); });
    const Eigen::VectorXd x = solve(sys, rhs);
    const Eigen::VectorXd ref = dense.partialPivLu().solve(rhs);
    EXPECT_LT((x - ref).lpNorm<Eigen::Infinity>(), 1e-12);
    EXPECT_LT((dense * x - rhs).lpNorm<Eigen::Infinity>(), 1e-12);
}

}  // namespace

TEST(BlockTridiagonal, MatchesDenseLuScalarBlocks) { check_against_dense_lu<1>(50, 1); }
TEST(BlockTridiagonal, MatchesDenseLuTwoByTwo) { check_against_dense_lu<2>(200, 2); }
TEST(BlockTridiagonal, MatchesDenseLuFourByFour) { check_against_dense_lu<4>(30, 3); }
TEST(BlockTridiagonal, SingleBlock) { check_against_dense_lu<2>(1, 4); }

TEST(BlockTridiagonal, SingularPivotThrows)
{
    BlockTridiagonal<double, 2> sys(3);
    for (auto& d : sys.diag) d.setIdentity();
    sys.diag[1].setZero();
    EXPECT_THROW(solve(sys, Eigen::VectorXd(Eigen::VectorXd::Ones(6))), ArgumentError);
}

TEST(BlockTridiagonal, WrongRhsLengthThrows)
{
    BlockTridiagonal<double, 2> sys(3);
    for (auto& d : sys.diag) d.setIdentity();
    EXPECT_THROW(solve(sys, Eigen::VectorXd(Eigen::VectorXd::Ones(5))), ArgumentError);
}

TEST(BlockTridiagonal, FloatScalar)
{
    BlockTridiagonal<float, 2> sys(4);
    for (auto& d : sys.diag) d = 2.0f * Eigen::Matrix2f::Identity();
    const Eigen::VectorXf x = solve(sys, Eigen::VectorXf(Eigen::VectorXf::Ones(8)));
    EXPECT_FLOAT_EQ(x(3), 0.5f);
}
