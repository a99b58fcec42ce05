#pragma once

#include <cmath>

#include <Eigen/Core>

namespace pwave {

// Discrete integrals over the reference interval y in [0, 1] sampled at
// y_i = i h, i = 0..n-1, h = 1/(n-1). Node values use the composite trapezoid
// rule; gradients live on the half nodes and use the midpoint rule, which is
// the same stencil the solver applies to the flux.

template <typename Derived>
typename Derived::Scalar grid_spacing(const Eigen::MatrixBase<Derived>& v)
{
    using Scalar = typename Derived::Scalar;
    return Scalar(1) / Scalar(v.size() - 1);
}

/// Integral of f^2 by the trapezoid rule.
template <typename Derived>
typename Derived::Scalar trapezoid_square(const Eigen::MatrixBase<Derived>& f)
{
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = f.size();
    const Scalar h = grid_spacing(f);
    const Scalar ends = (f(0) * f(0) + f(n - 1) * f(n - 1)) / Scalar(2);
    return h * (f.segment(1, n - 2).squaredNorm() + ends);
}

/// Half-node difference quotients (f_{i+1} - f_i) / h, length n - 1.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> half_node_gradient(
    const Eigen::MatrixBase<Derived>& f)
{
    const Eigen::Index n = f.size();
    return (f.tail(n - 1) - f.head(n - 1)) / grid_spacing(f);
}

/// Integral of |f_y|^p with the midpoint rule on half nodes.
template <typename Derived>
typename Derived::Scalar gradient_power_integral(const Eigen::MatrixBase<Derived>& f,
                                                 typename Derived::Scalar p)
{
    using Scalar = typename Derived::Scalar;
    const Scalar h = grid_spacing(f);
    const auto g = half_node_gradient(f);
    if (p == Scalar(2)) return h * g.squaredNorm();
    return h * g.array().abs().pow(p).sum();
}

}  // namespace pwave
