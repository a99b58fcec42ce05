// Acceptance suite: one PASS/FAIL line per criterion, INFO lines for context.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "pwave/constraints.hpp"
#include "pwave/energy.hpp"
#include "pwave/envelope.hpp"
#include "pwave/inequalities.hpp"
#include "pwave/komornik.hpp"
#include "pwave/solver.hpp"
#include "support/oracles.hpp"

using namespace pwave;
using oracle::kPi;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail)
{
    std::printf("%s criterion %2d  %-28s %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

void info(const std::string& detail)
{
    std::printf("INFO   %s\n", detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

struct Run {
    std::string name;
    SolverConfig cfg;
    SimulationResult result;
    double seconds = 0.0;
    bool expanding = false;
};

Run execute(std::string name, const SolverConfig& cfg, bool expanding)
{
    const auto t0 = std::chrono::steady_clock::now();
    Run r{std::move(name), cfg, simulate(cfg), 0.0, expanding};
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    info("run " + r.name +
         fmt(": steps=%.0f samples=%.0f states=%.0f  %.2f s", static_cast<double>(r.result.steps),
             static_cast<double>(r.result.trace.size()), static_cast<double>(r.result.states.size()), r.seconds));
    return r;
}

SolverConfig fixed_sine_config(Eigen::Index N, double dt, int sample_every)
{
    SolverConfig c;
    c.p = 2.0;
    c.traj = DomainTrajectory::constant(1.0, 2.0);
    c.N = N;
    c.dt = dt;
    c.t_end = 2.0;
    c.initial_profile = InitialShape::sine(1);
    c.initial_velocity = InitialShape::zero();
    c.sample_every = sample_every;
    c.state_every = 250;
    return c;
}

SolverConfig expanding_p2_config()
{
    SolverConfig c;
    c.p = 2.0;
    c.traj = DomainTrajectory::power_law(1.0, 0.5, 2.0, 60.0);
    c.N = 200;
    c.dt = 1e-2;
    c.t_end = 60.0;
    c.sample_every = 10;
    c.state_every = 500;
    return c;
}

SolverConfig expanding_p4_config()
{
    SolverConfig c;
    c.p = 4.0;
    c.traj = DomainTrajectory::power_law(1.0, 0.5, 3.0, 100.0);
    c.N = 100;
    c.dt = 2e-2;
    c.t_end = 100.0;
    c.sample_every = 5;
    c.state_every = 500;
    return c;
}

SolverConfig fixed_p4_config()
{
    SolverConfig c;
    c.p = 4.0;
    c.traj = DomainTrajectory::constant(1.0, 400.0);
    c.N = 100;
    c.dt = 5e-2;
    c.t_end = 400.0;
    c.sample_every = 4;
    c.state_every = 2000;
    return c;
}

double max_step_residual_ratio(const EnergyTrace& coarse, const EnergyTrace& fine)
{
    return max_abs_residual(coarse) / max_abs_residual(fine);
}

std::string csv_of(const EnergyTrace& tr)
{
    std::ostringstream os;
    write_trace_csv(os, tr);
    return os.str();
}

ReferenceState sampled_state(Eigen::Index N, double L, double p, const std::function<double(double)>& g)
{
    ReferenceState s = ReferenceState::zero(N, 0.0, L, p);
    for (Eigen::Index i = 1; i <= N; ++i) s.v(i) = g(static_cast<double>(i) / static_cast<double>(N + 1));
    return s;
}

}  // namespace

int main()
{
    std::vector<Run> suite;

    // 1. Dissipation identity on a fixed output grid of spacing 1e-3.
    suite.push_back(execute("c1a", fixed_sine_config(200, 1e-3, 1), false));
    suite.push_back(execute("c1b", fixed_sine_config(400, 5e-4, 2), false));
    {
        const auto& coarse = suite[0];
        const auto& fine = suite[1];
        const double E0 = coarse.result.trace.front().E;
        const double max_res = max_abs_residual(coarse.result.trace);
        const double ratio = max_abs_residual(coarse.result.trace) / max_abs_residual(fine.result.trace);
        const double seconds = coarse.seconds + fine.seconds;
        report(1, "dissipation identity",
               max_res <= 1e-4 * E0 && ratio >= 3.2 && ratio <= 4.8 && coarse.seconds < 10 && fine.seconds < 10,
               fmt("max|R|/E0=%.3e (<=1e-4)  refinement ratio=%.4f (in [3.2,4.8])  %.2f s", max_res / E0, ratio,
                   seconds));
        const double total_ratio = total_abs_residual(coarse.result.trace) / total_abs_residual(fine.result.trace);
        info(fmt("criterion 1: sum|R| ratio on the same grid = %.4f", total_ratio));
        auto per_step = fixed_sine_config(400, 5e-4, 1);
        per_step.state_every = 0;
        const auto fine_steps = simulate(per_step);
        info(fmt("criterion 1: per-step max|R| ratio (each run on its own step grid) = %.4f",
                 max_step_residual_ratio(coarse.result.trace, fine_steps.trace)));
    }

    // 2. Modal decay rate.
    {
        const auto& run = suite[0];
        const auto env = fit(run.result.trace, EnvelopeKind::ExpInT, {});
        const double rate = -env.slope;
        const double oracle_rate = oracle::modal_energy_rate();
        const double rel = std::abs(rate - oracle_rate) / oracle_rate;
        report(2, "modal decay rate", rel <= 0.05 && run.seconds < 10,
               fmt("fitted=%.5f oracle=%.5f rel.err=%.2e (<=0.05)", rate, oracle_rate, rel));
    }

    suite.push_back(execute("c5", expanding_p2_config(), true));
    suite.push_back(execute("c6", expanding_p4_config(), true));
    suite.push_back(execute("c7", fixed_p4_config(), false));
    const Run& run5 = suite[2];
    const Run& run6 = suite[3];
    const Run& run7 = suite[4];

    // 3. Monotonicity on every trace.
    {
        std::size_t bad = 0, checked = 0;
        for (const auto& r : suite) {
            const auto v = monotonicity_violations(r.result.trace);
            if (!v.empty()) info("criterion 3: violations in run " + r.name);
            bad += v.size();
            checked += r.result.trace.size();
        }
        report(3, "energy monotonicity", bad == 0,
               fmt("%.0f violations over %.0f samples in %.0f runs", static_cast<double>(bad),
                   static_cast<double>(checked), static_cast<double>(suite.size())));
    }

    // 4. Embedding inequalities and quadrature agreement.
    {
        std::size_t states = 0, violated = 0;
        double worst = INFINITY;
        for (const auto& r : suite) {
            for (const auto& s : r.result.states) {
                const auto e = check_embeddings(s);
                ++states;
                if (e.any_violated()) ++violated;
                for (auto [m, rhs] : {std::pair{e.margin1(), e.rhs1}, std::pair{e.margin2(), e.rhs2},
                                      std::pair{e.margin3(), e.rhs3}})
                    worst = std::min(worst, m / std::max(rhs, 1.0));
            }
        }
        struct Handpicked {
            double L, p;
            std::function<double(double)> g, dg;
        };
        const std::vector<Handpicked> picks = {
            {2.0, 4.0, [](double y) { return std::sin(kPi * y); }, [](double y) { return kPi * std::cos(kPi * y); }},
            {1.5, 3.0, [](double y) { return y * y * (1 - y); }, [](double y) { return 2 * y - 3 * y * y; }},
            {1.0, 2.0, [](double y) { return std::sin(2 * kPi * y); },
             [](double y) { return 2 * kPi * std::cos(2 * kPi * y); }},
            {0.7, 3.0, [](double y) { return 3 * std::sin(kPi * y); }, [](double y) { return 3 * kPi * std::cos(kPi * y); }},
            {5.0, 4.0, [](double y) { return y * (1 - y) * std::exp(y); },
             [](double y) { return (1 - y - y * y) * std::exp(y); }},
        };
        double worst_rel = 0.0;
        for (const auto& h : picks) {
            const auto ref = oracle::simpson_norms(h.g, h.dg, h.L, h.p);
            const auto e = check_embeddings(sampled_state(7999, h.L, h.p, h.g));
            const double grad_lp = std::pow(e.rhs2 / std::pow(h.L, 3.0 - 2.0 / h.p), 0.5);
            worst_rel = std::max({worst_rel, std::abs(e.lhs1 / ref.grad_l2_sq - 1), std::abs(e.lhs3 / ref.u_l2_sq - 1),
                                  std::abs(grad_lp / ref.grad_lp - 1)});
        }
        report(4, "embedding inequalities", violated == 0 && worst_rel <= 1e-6,
               fmt("%.0f states, %.0f violated, min margin/max(rhs,1)=%.3e; Simpson rel.err=%.2e (<=1e-6)",
                   static_cast<double>(states), static_cast<double>(violated), worst, worst_rel));
    }

    // 5. Exponential decay in the weight on an expanding domain.
    FitParams fp5;
    fp5.p = 2.0;
    const auto env5 = fit(run5.result.trace, EnvelopeKind::ExpInPhi, fp5);
    {
        const double dom = verify_envelope(run5.result.trace, env5);
        report(5, "p=2 expanding-domain shape",
               env5.r_squared >= 0.95 && env5.slope < 0 && dom <= 1 + 1e-6 && run5.seconds < 60,
               fmt("slope=%.4f R2=%.5f (>=0.95) dominance=%.9f (<=1+1e-6) %.2f s", env5.slope, env5.r_squared, dom,
                   run5.seconds));
    }

    // 6. E * phi^(1/beta) bounded and non-increasing over the last half of the fit window.
    {
        const double beta = 0.5;
        const auto phi = WeightFunction::power_shift(1.0, 0.5);
        const double t_lo = run6.cfg.t_end / 4, t_hi = run6.cfg.t_end;
        const double t_half = 0.5 * (t_lo + t_hi);
        double sup = 0.0, first = NAN, last = NAN, prev = NAN;
        bool finite = true, nonincreasing = true;
        for (const auto& s : run6.result.trace.samples) {
            if (s.t < t_lo) continue;
            const double prod = s.E * std::pow(phi.value(s.t), 1.0 / beta);
            finite = finite && std::isfinite(prod);
            sup = std::max(sup, prod);
            if (s.t >= t_half) {
                if (std::isnan(first)) first = prod;
                if (!std::isnan(prev) && prod > prev) nonincreasing = false;
                prev = last = prod;
            }
        }
        report(6, "p=4 expanding-domain shape", finite && nonincreasing && run6.seconds < 120,
               fmt("sup over window=%.4e; tail %.4e -> %.4e non-increasing=%s", sup, first, last, 0) +
                   (nonincreasing ? "yes" : "no") + fmt("  %.2f s", run6.seconds));
        FitParams fp6;
        fp6.p = 4.0;
        const auto env6 = fit(run6.result.trace, EnvelopeKind::PolyInPhi, fp6);
        info(fmt("criterion 6: log E vs log phi slope=%.4f (theory bound %.1f), dominance=%.9f", env6.slope,
                 -1.0 / beta, verify_envelope(run6.result.trace, env6)));
    }

    // 7. Bounded-domain decay.
    {
        const auto exp_fit = fit(suite[0].result.trace, EnvelopeKind::ExpInT, {});
        FitParams fp7;
        fp7.p = 4.0;
        const auto poly_fit = fit(run7.result.trace, EnvelopeKind::PolyInT, fp7);
        report(7, "bounded-domain decay", exp_fit.r_squared >= 0.99 && poly_fit.slope <= -1.8,
               fmt("p=2 exp_t R2=%.6f (>=0.99); p=4 poly_t slope=%.4f (<=-1.8)", exp_fit.r_squared, poly_fit.slope));
        info(fmt("criterion 7: dominance exp_t=%.9f poly_t=%.9f", verify_envelope(suite[0].result.trace, exp_fit),
                 verify_envelope(run7.result.trace, poly_fit)));
    }

    // 8. Weighted integral inequality.
    {
        const auto id = WeightFunction::identity();
        EnergyTrace exp_trace;
        for (double t : uniform_grid(0.0, 20.0, 2001)) exp_trace.samples.push_back({t, std::exp(-t), 0, 1, 0});
        const double a_exp = estimate_A(exp_trace, id, 0.0).A_hat;
        double worst_alg = 0.0;
        for (double q : {0.5, 1.0}) {
            EnergyTrace tr;
            for (double t : log1p_grid(2000.0, 20000)) tr.samples.push_back({t, std::pow(1 + t, -1 / q), 0, 1, 0});
            worst_alg = std::max(worst_alg, std::abs(estimate_A(tr, id, q).A_hat * q - 1));
        }
        double worst_bound = 0.0;
        for (const auto& r : suite) {
            const double q = (r.cfg.p - 2) / r.cfg.p;
            const auto phi = r.expanding ? WeightFunction::power_shift(1.0, 0.5) : id;
            const auto k = estimate_A(r.result.trace, phi, q);
            worst_bound = std::max(worst_bound, k.bound_violation);
        }
        report(8, "weighted integral inequality",
               std::abs(a_exp - 1) <= 0.01 && worst_alg <= 0.01 && worst_bound <= 1 + 1e-6,
               fmt("A(exp)=%.5f; max|qA-1|=%.2e (<=0.01); max bound ratio on suite=%.9f (<=1+1e-6)", a_exp,
                   worst_alg, worst_bound));
    }

    // 9. Admissibility thresholds and condition behaviour.
    {
        bool ok = true;
        std::string bad;
        auto expect = [&](bool cond, const std::string& what) {
            if (!cond) {
                ok = false;
                bad += " " + what;
            }
        };
        expect(m_min(4.0, 0.5) == 3.0, "m_min(4,.5)");
        expect(m_min(3.0, 0.5) == 3.0, "m_min(3,.5)");
        expect(std::abs(m_min_p2(2.0 / 3.0) - 2.0) <= 1e-12, "m_min_p2(2/3)");
        double worst_identity = 0.0;
        for (double p : {2.5, 3.0, 4.0, 5.0, 10.0}) worst_identity = std::max(worst_identity, beta_identity_check(p));
        expect(worst_identity <= 1e-14, "beta identity");
        double worst_match = 0.0;
        int diverging_cases = 0, cases = 0;
        struct Case {
            double p, alpha;
        };
        for (const auto [p, alpha] : {Case{4.0, 0.5}, Case{3.0, 0.5}, Case{2.0, 2.0 / 3.0}, Case{5.0, 0.4}}) {
            const double threshold = p == 2.0 ? m_min_p2(alpha) : m_min(p, alpha);
            const auto at = certify({p, alpha, threshold, 1.0, 0.5});
            worst_match = std::max(worst_match, at.matching_defect);
            bool all_finite = true;
            for (const auto* rep : {&at.theorem, &at.ansatz})
                for (const auto& c : rep->conditions) all_finite = all_finite && c.finite && c.satisfied;
            expect(all_finite, fmt("finite(p=%g)", p));
            const auto below = certify({p, alpha, threshold - 0.5, 1.0, 0.5});
            bool diverges = false;
            for (const auto& c : below.ansatz.conditions) diverges = diverges || c.diverging || !c.finite;
            ++cases;
            if (diverges) ++diverging_cases;
        }
        expect(worst_match <= 1e-12, "matching identity");
        expect(diverging_cases == cases, "divergence");
        report(9, "admissibility constraints", ok,
               fmt("m_min(4,.5)=%g m_min(3,.5)=%g m_min_p2(2/3)=%.12g; beta identity max=%.1e", m_min(4.0, 0.5),
                   m_min(3.0, 0.5), m_min_p2(2.0 / 3.0), worst_identity) +
                   fmt("; matching defect=%.1e; divergent below threshold %.0f/%.0f", worst_match, diverging_cases,
                       cases) +
                   bad);
    }

    // 10. Determinism and CSV round trip.
    {
        const auto again = simulate(expanding_p2_config());
        const std::string a = csv_of(run5.result.trace);
        const std::string b = csv_of(again.trace);
        std::istringstream in(a);
        const bool round_trip = read_trace_csv(in) == run5.result.trace;
        report(10, "determinism and round trip", a == b && round_trip,
               std::string("byte-identical=") + (a == b ? "yes" : "no") + " round-trip=" + (round_trip ? "yes" : "no") +
                   fmt(" (%.0f bytes)", static_cast<double>(a.size())));
    }

    std::printf("%s: %d failing criteria\n", failures ? "FAILED" : "ALL PASSED", failures);
    return failures ? 1 : 0;
}
