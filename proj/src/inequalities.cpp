#include "pwave/inequalities.hpp"

#include <algorithm>
#include <cmath>

#include "pwave/grid_norms.hpp"

namespace pwave {

namespace {

bool below(double lhs, double rhs, double tol)
{
    return rhs - lhs < -tol * std::max(rhs, 1.0);
}

}  // namespace

bool EmbeddingReport::violated1() const { return below(lhs1, rhs1, tol); }
bool EmbeddingReport::violated2() const { return below(lhs2, rhs2, tol); }
bool EmbeddingReport::violated3() const { return below(lhs3, rhs3, tol); }

EmbeddingReport check_embeddings(const ReferenceState& s, double tol)
{
    const double L = s.L;
    const double p = s.p;

    // x = L y: int f(x)^2 dx = L int f^2 dy, int |u_x|^q dx = L^(1-q) int |v_y|^q dy.
    const double u_sq = L * trapezoid_square(s.v);
    const double grad_sq = gradient_power_integral(s.v, 2.0) / L;
    const double grad_p = std::pow(L, 1.0 - p) * gradient_power_integral(s.v, p);
    const double grad_p_norm_sq = std::pow(grad_p, 2.0 / p);

    EmbeddingReport r;
    r.t = s.t;
    r.tol = tol;
    r.lhs1 = grad_sq;
    r.rhs1 = std::pow(L, 1.0 - 2.0 / p) * grad_p_norm_sq;
    r.lhs2 = u_sq;
    r.rhs2 = std::pow(L, 3.0 - 2.0 / p) * grad_p_norm_sq;
    r.lhs3 = u_sq;
    r.rhs3 = L * L * grad_sq;
    return r;
}

nlohmann::json to_json(const EmbeddingReport& r)
{
    return {
        {"t", r.t},
        {"lhs1", r.lhs1}, {"rhs1", r.rhs1}, {"margin1", r.margin1()},
        {"lhs2", r.lhs2}, {"rhs2", r.rhs2}, {"margin2", r.margin2()},
        {"lhs3", r.lhs3}, {"rhs3", r.rhs3}, {"margin3", r.margin3()},
        {"violated", r.any_violated()},
    };
}

}  // namespace pwave
