#include "pwave/solver.hpp"

#include <cmath>
#include <sstream>

#include "pwave/block_tridiagonal.hpp"
#include "pwave/errors.hpp"

namespace pwave {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Block = BlockTridiagonal<double, 2>::Block;

bool all_finite(const Eigen::VectorXd& x)
{
    return x.allFinite();
}

std::string at_time(const std::string& what, double t)
{
    std::ostringstream os;
    os << what << " at t = " << t;
    return os.str();
}

// Geometry of the reference grid at one time level.
struct Level {
    double t;
    double L;
    double mu;  // L'/L
};

Level level_at(const DomainTrajectory& traj, double t)
{
    const double L = traj.length(t);
    return {t, L, traj.length_rate(t) / L};
}

// Interior right-hand side f(v, w) at a given level, written into dv, dw
// (full length, boundary entries zero).
void evaluate_rhs(const Eigen::VectorXd& v, const Eigen::VectorXd& w, const Level& lv, const FluxLaw& flux,
                  const SourceTerm& source, Eigen::VectorXd& dv, Eigen::VectorXd& dw)
{
    const Eigen::Index n = v.size();
    const double h = 1.0 / static_cast<double>(n - 1);
    const double inv_h = 1.0 / h;
    const double scale_p = std::pow(lv.L, -flux.p);
    const double scale_2 = 1.0 / (lv.L * lv.L);

    dv.setZero(n);
    dw.setZero(n);
    double flux_left = flux.flux((v(1) - v(0)) * inv_h);
    for (Eigen::Index i = 1; i < n - 1; ++i) {
        const double y = static_cast<double>(i) * h;
        const double flux_right = flux.flux((v(i + 1) - v(i)) * inv_h);
        const double adv = lv.mu * y * 0.5 * inv_h;
        dv(i) = w(i) + adv * (v(i + 1) - v(i - 1));
        dw(i) = adv * (w(i + 1) - w(i - 1)) + scale_p * (flux_right - flux_left) * inv_h +
                scale_2 * (w(i + 1) - 2.0 * w(i) + w(i - 1)) * inv_h * inv_h;
        if (source) dw(i) += source(y, lv.t);
        flux_left = flux_right;
    }
}

// Newton matrix of the trapezoidal residual at the iterate (v, w), level lv.
BlockTridiagonal<double, 2> newton_matrix(const Eigen::VectorXd& v, const Level& lv, const FluxLaw& flux,
                                          double dt)
{
    const Eigen::Index n = v.size();
    const Eigen::Index interior = n - 2;
    const double h = 1.0 / static_cast<double>(n - 1);
    const double inv_h = 1.0 / h;
    const double inv_h2 = inv_h * inv_h;
    const double half_dt = 0.5 * dt;
    const double scale_p = std::pow(lv.L, -flux.p);
    const double diff = 1.0 / (lv.L * lv.L) * inv_h2;

    BlockTridiagonal<double, 2> J(static_cast<std::size_t>(interior));
    double slope_left = flux.slope((v(1) - v(0)) * inv_h);
    for (Eigen::Index i = 1; i <= interior; ++i) {
        const auto b = static_cast<std::size_t>(i - 1);
        const double slope_right = flux.slope((v(i + 1) - v(i)) * inv_h);
        const double adv = lv.mu * static_cast<double>(i) * h * 0.5 * inv_h;

        Block& d = J.diag[b];
        d << 1.0, -half_dt,
             half_dt * scale_p * (slope_left + slope_right) * inv_h2, 1.0 + dt * diff;

        Block& up = J.upper[b];
        up << -half_dt * adv, 0.0,
              -half_dt * scale_p * slope_right * inv_h2, -half_dt * (adv + diff);

        Block& lo = J.lower[b];
        lo << half_dt * adv, 0.0,
              -half_dt * scale_p * slope_left * inv_h2, -half_dt * (-adv + diff);

        slope_left = slope_right;
    }
    return J;
}

ReferenceState advance_to(const ReferenceState& state, const SolverConfig& cfg, double t_new, StepStats* stats)
{
    const FluxLaw flux = cfg.flux();
    const double dt = t_new - state.t;
    if (!(dt > 0)) throw ArgumentError("step length must be positive");

    const Level old_level{state.t, state.L, cfg.traj.length_rate(state.t) / state.L};
    const Level new_level = level_at(cfg.traj, t_new);

    Eigen::VectorXd fv_old, fw_old;
    evaluate_rhs(state.v, state.w, old_level, flux, cfg.source, fv_old, fw_old);
    if (!all_finite(fv_old) || !all_finite(fw_old))
        throw NumericalBlowup(at_time("non-finite right-hand side", state.t), state.t);

    const Eigen::Index n = state.v.size();
    const Eigen::Index interior = n - 2;
    const double half_dt = 0.5 * dt;
    const double base_scale = std::max(state.v.lpNorm<Eigen::Infinity>(), state.w.lpNorm<Eigen::Infinity>());

    ReferenceState next = state;
    next.t = t_new;
    next.L = new_level.L;

    Eigen::VectorXd fv, fw, residual(2 * interior);
    for (int iter = 0;; ++iter) {
        evaluate_rhs(next.v, next.w, new_level, flux, cfg.source, fv, fw);
        for (Eigen::Index i = 1; i <= interior; ++i) {
            residual(2 * (i - 1)) = next.v(i) - state.v(i) - half_dt * (fv(i) + fv_old(i));
            residual(2 * (i - 1) + 1) = next.w(i) - state.w(i) - half_dt * (fw(i) + fw_old(i));
        }
        const double rnorm = residual.lpNorm<Eigen::Infinity>();
        if (!std::isfinite(rnorm)) throw NumericalBlowup(at_time("non-finite Newton residual", t_new), t_new);

        double scale = std::max(base_scale, std::max(next.v.lpNorm<Eigen::Infinity>(),
                                                     next.w.lpNorm<Eigen::Infinity>()));
        if (scale == 0.0) scale = 1.0;
        if (rnorm == 0.0 || (iter > 0 && rnorm <= cfg.newton_tol * scale)) {
            if (stats) *stats = {iter, rnorm};
            return next;
        }
        if (iter == cfg.newton_max_iter) {
            std::ostringstream os;
            os << "Newton did not converge in " << cfg.newton_max_iter << " iterations (residual " << rnorm
               << ")";
            throw StepFailure(at_time(os.str(), t_new), t_new);
        }

        const Eigen::VectorXd delta = solve(newton_matrix(next.v, new_level, flux, dt), residual);
        for (Eigen::Index i = 1; i <= interior; ++i) {
            next.v(i) -= delta(2 * (i - 1));
            next.w(i) -= delta(2 * (i - 1) + 1);
        }
        if (!all_finite(next.v) || !all_finite(next.w))
            throw NumericalBlowup(at_time("non-finite Newton iterate", t_new), t_new);
    }
}

}  // namespace

double FluxLaw::flux(double s) const
{
    if (p == 2.0) return s;
    return std::pow(s * s + eps * eps, 0.5 * (p - 2.0)) * s;
}

double FluxLaw::slope(double s) const
{
    if (p == 2.0) return 1.0;
    const double r2 = s * s + eps * eps;
    if (r2 == 0.0) return 0.0;
    // (r2)^((p-4)/2) ((p-1) s^2 + eps^2)
    return std::pow(r2, 0.5 * (p - 4.0)) * ((p - 1.0) * s * s + eps * eps);
}

ReferenceState ReferenceState::zero(Eigen::Index interior, double t, double L, double p)
{
    ReferenceState s;
    s.t = t;
    s.v = Eigen::VectorXd::Zero(interior + 2);
    s.w = Eigen::VectorXd::Zero(interior + 2);
    s.L = L;
    s.p = p;
    return s;
}

void ReferenceState::validate() const
{
    if (v.size() < 5 || v.size() != w.size()) throw ArgumentError("state needs matching v, w with N >= 3");
    if (!(L > 0) || !std::isfinite(L)) throw ArgumentError("state length L must be positive and finite");
    if (!(p >= 2)) throw ArgumentError("state exponent p must be >= 2");
    if (v(0) != 0.0 || v(v.size() - 1) != 0.0 || w(0) != 0.0 || w(w.size() - 1) != 0.0)
        throw ArgumentError("state violates homogeneous Dirichlet boundary values");
    if (!v.allFinite() || !w.allFinite()) throw ArgumentError("state has non-finite entries");
}

Eigen::VectorXd InitialShape::sample(Eigen::Index interior) const
{
    const Eigen::Index n = interior + 2;
    const double h = 1.0 / static_cast<double>(n - 1);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 1; i < n - 1; ++i) {
        const double y = static_cast<double>(i) * h;
        switch (kind) {
        case Kind::Zero:
            break;
        case Kind::Sine:
            out(i) = std::sin(static_cast<double>(mode) * kPi * y);
            break;
        case Kind::Bump:
            out(i) = 4.0 * y * (1.0 - y);
            break;
        case Kind::Table: {
            const double pos = y * static_cast<double>(table.size() - 1);
            const auto j = std::min(static_cast<std::size_t>(pos), table.size() - 2);
            const double frac = pos - static_cast<double>(j);
            out(i) = table[j] + frac * (table[j + 1] - table[j]);
            break;
        }
        }
    }
    return amplitude * out;
}

void SolverConfig::validate() const
{
    auto fail = [](const std::string& m) { throw ArgumentError(m); };
    if (!(p >= 2) || !std::isfinite(p)) fail("solver.p must be >= 2");
    if (N < 3) fail("solver.N must be >= 3");
    if (!(dt > 0) || !std::isfinite(dt)) fail("solver.dt must be > 0");
    if (!(t_end > 0) || !std::isfinite(t_end)) fail("solver.t_end must be > 0");
    if (!(eps_reg >= 0)) fail("solver.eps_reg must be >= 0");
    if (!(newton_tol > 0)) fail("solver.newton_tol must be > 0");
    if (newton_max_iter < 1) fail("solver.newton_max_iter must be >= 1");
    if (sample_every < 1) fail("solver.sample_every must be >= 1");
    if (state_every < 0) fail("solver.state_every must be >= 0");
    if (max_halvings < 0) fail("solver.max_halvings must be >= 0");
    if (traj.t_max() < t_end) fail("trajectory horizon is shorter than solver.t_end");
    for (const auto* shape : {&initial_profile, &initial_velocity}) {
        if (shape->kind == InitialShape::Kind::Sine && shape->mode < 1) fail("sine mode must be >= 1");
        if (shape->kind == InitialShape::Kind::Table && shape->table.size() < 2)
            fail("table initial data needs at least two values");
        if (!std::isfinite(shape->amplitude)) fail("initial amplitude must be finite");
    }
}

SemiDiscreteRhs transform_system_rhs(const ReferenceState& state, const DomainTrajectory& traj,
                                     double eps_reg, const SourceTerm& source)
{
    state.validate();
    const Level lv{state.t, state.L, traj.length_rate(state.t) / state.L};
    const FluxLaw law{state.p, eps_reg};
    SemiDiscreteRhs out;
    evaluate_rhs(state.v, state.w, lv, law, source, out.dv, out.dw);
    if (!all_finite(out.dv) || !all_finite(out.dw))
        throw NumericalBlowup(at_time("non-finite right-hand side", state.t), state.t);
    return out;
}

ReferenceState step(const ReferenceState& state, const SolverConfig& cfg, StepStats* stats)
{
    return step(state, cfg, cfg.dt, stats);
}

ReferenceState step(const ReferenceState& state, const SolverConfig& cfg, double dt, StepStats* stats)
{
    const double t_new = state.t + dt;
    if (t_new > cfg.t_end * (1.0 + 1e-12)) throw ArgumentError("step would pass t_end");
    return advance_to(state, cfg, std::min(t_new, cfg.t_end), stats);
}

ReferenceState initial_state(const SolverConfig& cfg)
{
    ReferenceState s;
    s.t = 0.0;
    s.L = cfg.traj.length(0.0);
    s.p = cfg.p;
    s.v = cfg.initial_profile.sample(cfg.N);
    s.w = cfg.initial_velocity.sample(cfg.N);
    return s;
}

SimulationResult simulate(const SolverConfig& cfg)
{
    cfg.validate();
    SimulationResult out;
    ReferenceState state = initial_state(cfg);

    double E_prev = energy(state);
    double D_prev = dissipation(state);
    double pending = 0.0;
    out.trace.samples.push_back({0.0, E_prev, D_prev, state.L, 0.0});
    out.states.push_back(state);

    auto accept = [&](ReferenceState&& s, const StepStats& st) {
        const double E = energy(s);
        const double D = dissipation(s);
        pending += E - E_prev + 0.5 * (D + D_prev) * (s.t - state.t);
        E_prev = E;
        D_prev = D;
        out.newton_iterations += static_cast<std::size_t>(st.newton_iterations);
        state = std::move(s);
    };

    auto advance = [&](auto&& self, double t_target, int depth) -> void {
        StepStats st;
        try {
            accept(advance_to(state, cfg, t_target, &st), st);
        } catch (const StepFailure&) {
            if (depth >= cfg.max_halvings) throw;
            ++out.halvings;
            const double t_mid = state.t + 0.5 * (t_target - state.t);
            self(self, t_mid, depth + 1);
            self(self, t_target, depth + 1);
        }
    };

    const auto n_steps = static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
    for (std::size_t n = 1; n <= n_steps; ++n) {
        const bool last = n == n_steps;
        const double t_target = last ? cfg.t_end : static_cast<double>(n) * cfg.dt;
        advance(advance, t_target, 0);
        ++out.steps;
        if (last || n % static_cast<std::size_t>(cfg.sample_every) == 0) {
            out.trace.samples.push_back({state.t, E_prev, D_prev, state.L, pending});
            pending = 0.0;
        }
        if (last || (cfg.state_every > 0 && n % static_cast<std::size_t>(cfg.state_every) == 0))
            out.states.push_back(state);
    }
    return out;
}

}  // namespace pwave
