#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "pwave/domain.hpp"
#include "pwave/energy.hpp"
#include "pwave/state.hpp"

namespace pwave {

/// Regularized p-Laplacian flux Phi(s) = (s^2 + eps^2)^((p-2)/2) s.
struct FluxLaw {
    double p = 2.0;
    double eps = 0.0;

    double flux(double s) const;
    double slope(double s) const;  // dPhi/ds
};

/// Initial data on Omega_0 = (0, L(0)), given in the reference coordinate y = x / L(0).
struct InitialShape {
    enum class Kind { Zero, Sine, Bump, Table };

    Kind kind = Kind::Zero;
    int mode = 1;                    // Sine: sin(mode pi y)
    std::vector<double> table;       // Table: values on a uniform grid over [0, 1]
    double amplitude = 1.0;

    static InitialShape zero() { return {}; }
    static InitialShape sine(int n, double amplitude = 1.0) { return {Kind::Sine, n, {}, amplitude}; }
    static InitialShape bump(double amplitude = 1.0) { return {Kind::Bump, 1, {}, amplitude}; }
    static InitialShape from_table(std::vector<double> values, double amplitude = 1.0)
    {
        return {Kind::Table, 1, std::move(values), amplitude};
    }

    /// Samples the shape at y in [0, 1]; boundary values are forced to zero.
    Eigen::VectorXd sample(Eigen::Index interior) const;
};

/// Optional verification-only forcing added to dw/dt, as a function of (y, t).
using SourceTerm = std::function<double(double y, double t)>;

struct SolverConfig {
    double p = 2.0;
    DomainTrajectory traj = DomainTrajectory::constant(1.0, 1.0);
    Eigen::Index N = 200;
    double dt = 1e-3;
    double t_end = 1.0;
    double eps_reg = 1e-8;
    double newton_tol = 1e-10;
    int newton_max_iter = 30;
    InitialShape initial_profile = InitialShape::sine(1);
    InitialShape initial_velocity = InitialShape::zero();
    int sample_every = 1;  // trace cadence in steps
    int state_every = 0;   // stored-state cadence in steps; 0 stores only t = 0 and t_end
    int max_halvings = 10;
    SourceTerm source;

    /// Throws ArgumentError when an invariant is violated.
    void validate() const;
    FluxLaw flux() const { return {p, eps_reg}; }
};

struct SemiDiscreteRhs {
    Eigen::VectorXd dv;
    Eigen::VectorXd dw;
};

/// Right-hand side of the reference-domain system
///   v_t = w + mu y v_y,
///   w_t = mu y w_y + L^-p (Phi(v_y))_y + L^-2 w_yy (+ source),
/// mu = L'/L, with conservative half-node fluxes and central advection.
/// Boundary entries of the result are zero. Throws NumericalBlowup on
/// non-finite output.
SemiDiscreteRhs transform_system_rhs(const ReferenceState& state, const DomainTrajectory& traj,
                                     double eps_reg = 0.0, const SourceTerm& source = {});

struct StepStats {
    int newton_iterations = 0;
    double final_residual = 0.0;
};

/// One trapezoidal (Crank-Nicolson) step of length cfg.dt, solved by Newton
/// iteration with block-tridiagonal linear solves. Throws StepFailure when
/// Newton does not converge and NumericalBlowup on non-finite iterates.
ReferenceState step(const ReferenceState& state, const SolverConfig& cfg, StepStats* stats = nullptr);

/// Same as step() with an explicit step length.
ReferenceState step(const ReferenceState& state, const SolverConfig& cfg, double dt, StepStats* stats = nullptr);

/// State at t = 0 built from the configured initial data.
ReferenceState initial_state(const SolverConfig& cfg);

struct SimulationResult {
    EnergyTrace trace;
    std::vector<ReferenceState> states;
    std::size_t steps = 0;
    std::size_t halvings = 0;
    std::size_t newton_iterations = 0;
};

/// Marches from t = 0 to t_end. The trace gets a row every `sample_every`
/// steps (and at t_end) whose residual accumulates the per-step identity
/// defects since the previous row. Failing steps are retried with halved
/// sub-steps up to cfg.max_halvings times before the StepFailure propagates.
SimulationResult simulate(const SolverConfig& cfg);

}  // namespace pwave
