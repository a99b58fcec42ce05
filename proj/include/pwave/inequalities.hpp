#pragma once

#include <json.hpp>

#include "pwave/state.hpp"

namespace pwave {

/// Both sides of the three embedding inequalities on Omega_t = (0, L):
///   (1) ||u_x||_2^2 <= L^(1-2/p) ||u_x||_p^2          (Hoelder)
///   (2) ||u||_2^2   <= L^(3-2/p) ||u_x||_p^2
///   (3) ||u||_2^2   <= L^2 ||u_x||_2^2                (Poincare, pinned left end)
struct EmbeddingReport {
    double t = 0.0;
    double lhs1 = 0.0, rhs1 = 0.0;
    double lhs2 = 0.0, rhs2 = 0.0;
    double lhs3 = 0.0, rhs3 = 0.0;

    double margin1() const { return rhs1 - lhs1; }
    double margin2() const { return rhs2 - lhs2; }
    double margin3() const { return rhs3 - lhs3; }

    /// Relative tolerance used to classify a margin as a violation.
    double tol = 1e-8;
    bool violated1() const;
    bool violated2() const;
    bool violated3() const;
    bool any_violated() const { return violated1() || violated2() || violated3(); }
};

/// Norms by the same quadrature as energy(): trapezoid for u, half-node
/// midpoint rule for u_x. A margin below -tol * max(rhs, 1) is a violation.
EmbeddingReport check_embeddings(const ReferenceState& state, double tol = 1e-8);

nlohmann::json to_json(const EmbeddingReport& r);

}  // namespace pwave
