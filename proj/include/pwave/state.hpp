#pragma once

#include <Eigen/Core>

namespace pwave {

/// (u, u_t) sampled on the reference grid y_i = i / (N + 1), i = 0..N+1, at time t.
///
/// The physical coordinate is x = L y. Boundary entries are zero (homogeneous
/// Dirichlet data).
struct ReferenceState {
    double t = 0.0;
    Eigen::VectorXd v;  // u
    Eigen::VectorXd w;  // u_t
    double L = 1.0;
    double p = 2.0;

    /// N + 2 zero entries in each of v and w.
    static ReferenceState zero(Eigen::Index interior, double t, double L, double p);

    Eigen::Index interior() const { return v.size() - 2; }
    double spacing() const { return 1.0 / static_cast<double>(v.size() - 1); }

    /// Throws ArgumentError when the layout, boundary values, L or p are invalid
    /// or an entry is non-finite.
    void validate() const;
};

}  // namespace pwave
