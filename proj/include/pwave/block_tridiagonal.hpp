#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "pwave/errors.hpp"

namespace pwave {

/// Block-tridiagonal system with square B x B blocks.
///
/// Row i reads lower[i] x_{i-1} + diag[i] x_i + upper[i] x_{i+1} = rhs_i;
/// lower[0] and upper[n-1] are ignored.
template <typename Scalar, int B>
struct BlockTridiagonal {
    static_assert(B >= 1 && B <= 4, "closed-form block inverses need B <= 4");

    using Block = Eigen::Matrix<Scalar, B, B>;
    using Vec = Eigen::Matrix<Scalar, B, 1>;

    explicit BlockTridiagonal(std::size_t n) : lower(n, Block::Zero()), diag(n, Block::Zero()), upper(n, Block::Zero()) {}

    std::size_t size() const { return diag.size(); }

    std::vector<Block> lower;
    std::vector<Block> diag;
    std::vector<Block> upper;
};

/// Block Thomas elimination, O(n B^3). `rhs` is the stacked vector
/// (x_0, x_1, ...) of length n B. No pivoting across blocks; a singular pivot
/// block raises ArgumentError. Blocks up to 4 x 4 (closed-form inverses).
template <typename Scalar, int B>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> solve(const BlockTridiagonal<Scalar, B>& sys,
                                               const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& rhs)
{
    using Block = typename BlockTridiagonal<Scalar, B>::Block;
    using Vec = typename BlockTridiagonal<Scalar, B>::Vec;

    const std::size_t n = sys.size();
    if (static_cast<std::size_t>(rhs.size()) != n * B)
        throw ArgumentError("block-tridiagonal solve: right-hand side has the wrong length");

    std::vector<Block> pivot_inv(n);
    std::vector<Vec> r(n);

    auto invert = [](const Block& m) {
        Block inv;
        bool ok = false;
        m.computeInverseWithCheck(inv, ok);
        if (!ok) throw ArgumentError("block-tridiagonal solve: singular pivot block");
        return inv;
    };

    pivot_inv[0] = invert(sys.diag[0]);
    r[0] = rhs.template segment<B>(0);
    for (std::size_t i = 1; i < n; ++i) {
        const Block m = sys.lower[i] * pivot_inv[i - 1];
        pivot_inv[i] = invert(sys.diag[i] - m * sys.upper[i - 1]);
        r[i] = rhs.template segment<B>(static_cast<Eigen::Index>(i * B)) - m * r[i - 1];
    }

    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x(rhs.size());
    Vec next = pivot_inv[n - 1] * r[n - 1];
    x.template segment<B>(static_cast<Eigen::Index>((n - 1) * B)) = next;
    for (std::size_t i = n - 1; i-- > 0;) {
        next = pivot_inv[i] * (r[i] - sys.upper[i] * next);
        x.template segment<B>(static_cast<Eigen::Index>(i * B)) = next;
    }
    return x;
}

}  // namespace pwave
