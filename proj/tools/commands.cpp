#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "pwave/energy.hpp"
#include "pwave/envelope.hpp"
#include "pwave/errors.hpp"
#include "pwave/inequalities.hpp"
#include "pwave/komornik.hpp"
#include "pwave/solver.hpp"
#include "svg_plot.hpp"

namespace pwave::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kRatioTol = 1e-6;

std::ofstream open_out(const fs::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

void write_json(const fs::path& path, const json& j)
{
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

EnergyTrace read_trace_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open trace '" + path + "'", 0);
    return read_trace_csv(in);
}

bool is_constant_domain(const DomainTrajectory& traj)
{
    return std::holds_alternative<Constant>(traj.family());
}

WeightFunction resolve_weight(const RunConfig& rc)
{
    const auto& a = rc.analysis;
    const bool identity = a.weight == "identity" || (a.weight == "auto" && is_constant_domain(rc.solver.traj));
    return identity ? WeightFunction::identity() : WeightFunction::power_shift(a.weight_k, a.weight_gamma);
}

EnvelopeKind resolve_kind(const RunConfig& rc)
{
    if (rc.analysis.fit_envelope != "auto") return envelope_kind_from_string(rc.analysis.fit_envelope);
    const bool p2 = rc.solver.p == 2.0;
    if (is_constant_domain(rc.solver.traj)) return p2 ? EnvelopeKind::ExpInT : EnvelopeKind::PolyInT;
    return p2 ? EnvelopeKind::ExpInPhi : EnvelopeKind::PolyInPhi;
}

std::string fmt(double v, int prec = 6)
{
    if (!std::isfinite(v)) return v > 0 ? "inf" : "nan";
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

void emit_plots(const RunConfig& rc, const fs::path& dir, const EnergyTrace& trace, const DecayEnvelope* env,
                const WeightFunction& phi, std::vector<std::string>& written)
{
    std::vector<double> t, E;
    for (const auto& s : trace.samples) {
        t.push_back(s.t);
        E.push_back(s.E);
    }
    PlotSeries energy{"E(t)", t, E, "#1f77b4", false};

    PlotSpec linear{rc.label + ": energy", "t", "E", false, {energy}};
    write_svg((dir / "energy_linear.svg").string(), linear);
    written.push_back("energy_linear.svg");

    PlotSpec semilog{rc.label + ": energy", "t", "E", true, {energy}};
    std::vector<double> env_t, env_v;
    if (env) {
        for (const auto& s : trace.samples) {
            if (s.t < env->t_lo || s.t > env->t_hi) continue;
            env_t.push_back(s.t);
            env_v.push_back(eval_envelope(*env, s.t));
        }
        semilog.series.push_back({"envelope " + to_string(env->kind), env_t, env_v, "#d62728", true});
    }
    write_svg((dir / "energy_semilog.svg").string(), semilog);
    written.push_back("energy_semilog.svg");

    if (std::holds_alternative<PowerShift>(phi.family())) {
        std::vector<double> ph;
        for (double ti : t) ph.push_back(phi.value(ti));
        PlotSpec vs_phi{rc.label + ": energy against phi(t)", "phi(t)", "E", true, {{"E", ph, E, "#1f77b4", false}}};
        if (env) {
            std::vector<double> env_ph;
            for (double ti : env_t) env_ph.push_back(phi.value(ti));
            vs_phi.series.push_back({"envelope " + to_string(env->kind), env_ph, env_v, "#d62728", true});
        }
        write_svg((dir / "energy_vs_phi.svg").string(), vs_phi);
        written.push_back("energy_vs_phi.svg");
    }
}

}  // namespace

int exit_code_for(const std::exception& e)
{
    if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const ArgumentError*>(&e) ||
        dynamic_cast<const DomainError*>(&e))
        return kExitConfig;
    if (dynamic_cast<const NumericalBlowup*>(&e) || dynamic_cast<const StepFailure*>(&e)) return kExitBlowup;
    if (dynamic_cast<const HypothesisViolation*>(&e) || dynamic_cast<const DegenerateTrace*>(&e) ||
        dynamic_cast<const DegenerateFit*>(&e))
        return kExitHypothesis;
    return kExitInternal;
}

std::string describe_error(const std::exception& e)
{
    std::ostringstream os;
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
        os << "parse error";
        if (pe->line() > 0) os << " at line " << pe->line();
        if (!pe->field().empty()) os << " (field " << pe->field() << ")";
        os << ": " << pe->what();
    } else if (const auto* be = dynamic_cast<const NumericalBlowup*>(&e)) {
        os << "numerical blow-up at t = " << fmt(be->time(), 10) << ": " << be->what();
    } else if (const auto* se = dynamic_cast<const StepFailure*>(&e)) {
        os << "step failure at t = " << fmt(se->time(), 10) << ": " << se->what();
    } else if (const auto* hv = dynamic_cast<const HypothesisViolation*>(&e)) {
        os << "hypothesis violation [" << hv->condition() << "]: " << hv->what();
    } else if (exit_code_for(e) == kExitConfig) {
        os << "invalid input: " << e.what();
    } else if (exit_code_for(e) == kExitHypothesis) {
        os << "analysis failed: " << e.what();
    } else {
        os << "error: " << e.what();
    }
    return os.str();
}

RunSummary run_simulation(const RunConfig& rc, const fs::path& dir)
{
    const auto started = std::chrono::steady_clock::now();
    fs::create_directories(dir);

    const SolverConfig& cfg = rc.solver;
    const double beta = (cfg.p - 2.0) / cfg.p;

    RunSummary sum;
    sum.label = rc.label;
    sum.p = cfg.p;
    if (rc.trajectory.family == "powerlaw") {
        sum.m = rc.trajectory.m;
        sum.gamma = rc.trajectory.gamma;
    } else if (!is_constant_domain(cfg.traj)) {
        sum.gamma = rc.analysis.weight_gamma;
    }
    sum.outside_theory = cfg.traj.outside_theory();

    json record = {
        {"schema_version", "1"},
        {"label", rc.label},
        {"config", rc.snapshot},
        {"trajectory_family", cfg.traj.family_name()},
        {"outside_theory", sum.outside_theory},
    };
    json reports = json::object();
    json warnings = json::array();
    std::vector<std::string> failures;

    auto finish = [&]() {
        if (sum.exit_code == kExitOk && !failures.empty()) {
            sum.exit_code = kExitHypothesis;
            sum.status = "hypothesis:" + failures.front();
            sum.message = "hypothesis violation [" + failures.front() + "]";
        }
        record["reports"] = reports;
        record["warnings"] = warnings;
        record["failures"] = failures;
        record["status"] = sum.status;
        record["exit_code"] = sum.exit_code;
        if (!sum.message.empty()) record["message"] = sum.message;
        record["wall_clock_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        write_json(dir / "run.json", record);
        return sum;
    };

    if (rc.analysis.constraints) {
        const ParameterSet params{cfg.p, rc.analysis.alpha_for(cfg.p), rc.trajectory.m, rc.trajectory.k,
                                  rc.trajectory.gamma};
        const auto cert = certify(params);
        write_json(dir / "constraints.json", to_json(cert));
        reports["constraints"] = "constraints.json";
        if (!cert.passed()) failures.push_back(cert.failure());
    }

    SimulationResult res;
    try {
        res = simulate(cfg);
    } catch (const NumericalBlowup& e) {
        sum.exit_code = kExitBlowup;
        sum.status = "blowup";
        sum.message = describe_error(e);
        record["failure_time"] = e.time();
        return finish();
    } catch (const StepFailure& e) {
        sum.exit_code = kExitBlowup;
        sum.status = "blowup";
        sum.message = describe_error(e);
        record["failure_time"] = e.time();
        return finish();
    }
    const EnergyTrace& trace = res.trace;
    record["steps"] = res.steps;
    record["halvings"] = res.halvings;
    record["newton_iterations"] = res.newton_iterations;

    {
        auto out = open_out(dir / "trace.csv");
        write_trace_csv(out, trace);
    }
    record["trace_csv"] = "trace.csv";

    const double E0 = trace.front().E;
    const auto violations = monotonicity_violations(trace);
    record["trace_checks"] = {
        {"E0", E0},
        {"E_end", trace.back().E},
        {"max_abs_residual", max_abs_residual(trace)},
        {"total_abs_residual", total_abs_residual(trace)},
        {"monotonicity_violations", violations.size()},
    };
    if (!violations.empty()) failures.push_back("monotonicity");

    if (rc.analysis.check_embeddings) {
        auto out = open_out(dir / "embeddings.jsonl");
        std::string violated;
        for (const auto& state : res.states) {
            const auto rep = check_embeddings(state);
            out << to_json(rep).dump() << '\n';
            if (violated.empty()) {
                if (rep.violated1()) violated = "embedding1";
                else if (rep.violated2()) violated = "embedding2";
                else if (rep.violated3()) violated = "embedding3";
            }
        }
        reports["embeddings"] = "embeddings.jsonl";
        if (!violated.empty()) failures.push_back(violated);
    }

    const WeightFunction phi = resolve_weight(rc);
    record["weight"] = phi.name();

    if (rc.analysis.komornik) {
        if (!(E0 > 0)) {
            warnings.push_back("komornik skipped: zero initial energy");
        } else {
            const double q = rc.analysis.komornik_q.value_or(beta);
            try {
                const auto rep = estimate_A(trace, phi, q);
                const auto bound = decay_bound(E0, q, rep.A_hat, phi);
                std::vector<double> column;
                for (const auto& s : trace.samples) column.push_back(bound(s.t));
                auto out = open_out(dir / "trace_bound.csv");
                write_trace_csv(out, trace, &column);
                write_json(dir / "komornik.json", to_json(rep, true));
                reports["komornik"] = "komornik.json";
                reports["trace_bound"] = "trace_bound.csv";
                if (rep.tail_untrusted) warnings.push_back("komornik: tail_fraction above 1%, A_hat untrusted");
                if (rep.bound_violation > 1.0 + kRatioTol) failures.push_back("komornik_bound");
            } catch (const HypothesisViolation& e) {
                failures.push_back(e.condition());
                warnings.push_back(describe_error(e));
            } catch (const DegenerateTrace& e) {
                failures.push_back("degenerate_trace");
                warnings.push_back(describe_error(e));
            }
        }
    }

    std::optional<DecayEnvelope> env;
    if (rc.analysis.fit_envelope != "none") {
        if (!(E0 > 0)) {
            warnings.push_back("envelope fit skipped: zero initial energy");
        } else {
            const FitParams fp{rc.analysis.weight_k, rc.analysis.weight_gamma, cfg.p, rc.analysis.fit_t_lo,
                               rc.analysis.fit_t_hi};
            try {
                env = fit(trace, resolve_kind(rc), fp);
                sum.fitted_slope = env->slope;
                sum.r_squared = env->r_squared;
                sum.envelope_ratio = verify_envelope(trace, *env);
                json j = to_json(*env);
                j["dominance_ratio"] = sum.envelope_ratio;
                j["outside_theory"] = sum.outside_theory;
                write_json(dir / "envelope.json", j);
                reports["envelope"] = "envelope.json";
                if (sum.envelope_ratio > 1.0 + kRatioTol) failures.push_back("envelope_dominance");
            } catch (const DegenerateFit& e) {
                failures.push_back("envelope_fit");
                warnings.push_back(describe_error(e));
            } catch (const ArgumentError& e) {
                failures.push_back("envelope_fit");
                warnings.push_back(std::string("envelope fit: ") + e.what());
            }
        }
    }

    if (rc.analysis.plots) {
        std::vector<std::string> plots;
        emit_plots(rc, dir, trace, env ? &*env : nullptr, phi, plots);
        record["plots"] = plots;
    }
    return finish();
}

int cmd_simulate(const std::string& config_path, const std::optional<std::string>& output_dir, std::ostream& out,
                 std::ostream& err)
{
    const RunConfig rc = load_run_config(config_path);
    const fs::path dir = output_dir.value_or(rc.output_dir);
    const auto sum = run_simulation(rc, dir);
    out << rc.label << ": " << sum.status;
    if (std::isfinite(sum.fitted_slope))
        out << "  slope=" << fmt(sum.fitted_slope) << "  R2=" << fmt(sum.r_squared)
            << "  envelope_ratio=" << fmt(sum.envelope_ratio, 10);
    if (sum.outside_theory) out << "  [outside theory]";
    out << "  -> " << (dir / "run.json").string() << '\n';
    if (sum.exit_code != kExitOk) err << sum.message << '\n';
    return sum.exit_code;
}

int cmd_check_constraints(const ParameterSet& params, double t_max, std::size_t grid_points,
                          const std::optional<std::string>& json_path, std::ostream& out)
{
    const auto cert = certify(params, t_max, grid_points);
    out << "p=" << fmt(params.p) << " alpha=" << fmt(params.alpha) << " m=" << fmt(params.m)
        << " k=" << fmt(params.k) << " gamma=" << fmt(params.gamma) << "  m_min=" << fmt(cert.threshold)
        << "  beta=" << fmt(params.beta()) << "  q_conj=" << fmt(params.q_conj()) << '\n';
    out << std::left << std::setw(8) << "cond" << std::setw(14) << "theorem sup" << std::setw(14) << "tail growth"
        << std::setw(14) << "ansatz sup" << std::setw(14) << "tail growth" << "status\n";
    for (std::size_t i = 0; i < cert.theorem.conditions.size(); ++i) {
        const auto& th = cert.theorem.conditions[i];
        const auto& an = cert.ansatz.conditions[i];
        const bool ok = th.satisfied && an.satisfied;
        out << std::left << std::setw(8) << th.label << std::setw(14) << fmt(th.sup) << std::setw(14)
            << fmt(th.tail_growth) << std::setw(14) << fmt(an.sup) << std::setw(14) << fmt(an.tail_growth)
            << (ok ? "ok" : (an.diverging || th.diverging ? "DIVERGES" : "UNBOUNDED")) << '\n';
    }
    out << (cert.passed() ? "PASS" : "FAIL");
    if (!cert.passed()) out << " (" << cert.failure() << ")";
    out << '\n';

    const json j = to_json(cert);
    if (json_path) {
        write_json(*json_path, j);
    } else {
        out << j.dump(2) << '\n';
    }
    return cert.passed() ? kExitOk : kExitHypothesis;
}

int cmd_komornik(const std::string& trace_path, double q, const WeightArgs& weight,
                 const std::optional<std::string>& json_path, std::ostream& out, std::ostream& err)
{
    if (!(q >= 0)) throw ArgumentError("q must be >= 0");
    const EnergyTrace trace = read_trace_file(trace_path);
    WeightFunction phi = WeightFunction::identity();
    if (weight.kind == "power_shift")
        phi = WeightFunction::power_shift(weight.k, weight.gamma);
    else if (weight.kind != "identity")
        throw ArgumentError("weight must be identity or power_shift");

    const auto rep = estimate_A(trace, phi, q);
    if (json_path) write_json(*json_path, to_json(rep, true));
    out << to_json(rep).dump(2) << '\n';
    out << "A_hat=" << fmt(rep.A_hat, 10) << " tail_fraction=" << fmt(rep.tail_fraction)
        << " bound_violation=" << fmt(rep.bound_violation, 10) << '\n';
    if (rep.tail_untrusted) err << "warning: tail_fraction above 1%, the truncated estimate is untrusted\n";
    if (rep.bound_violation > 1.0 + kRatioTol) err << "hypothesis violation [komornik_bound]\n";
    return rep.tail_untrusted || rep.bound_violation > 1.0 + kRatioTol ? kExitHypothesis : kExitOk;
}

int cmd_fit(const std::string& trace_path, const FitArgs& args, const std::optional<std::string>& json_path,
            std::ostream& out)
{
    const EnergyTrace trace = read_trace_file(trace_path);
    const auto env = fit(trace, envelope_kind_from_string(args.kind), {args.k, args.gamma, args.p, args.t_lo, args.t_hi});
    const double ratio = verify_envelope(trace, env);
    json j = to_json(env);
    j["dominance_ratio"] = ratio;
    if (json_path) write_json(*json_path, j);
    out << j.dump(2) << '\n';
    return ratio <= 1.0 + kRatioTol ? kExitOk : kExitHypothesis;
}

unsigned sweep_threads()
{
    if (const char* env = std::getenv("PWAVE_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void write_summary_csv(std::ostream& out, const std::vector<RunSummary>& rows)
{
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; };
    auto num = [](double v) { return std::isfinite(v) ? format_double(v) : std::string{}; };
    out << "run,p,m,gamma,fitted_slope,r_squared,envelope_ratio,outside_theory,status\n";
    for (const auto& r : rows) {
        out << r.label << ',' << format_double(r.p) << ',' << opt(r.m) << ',' << opt(r.gamma) << ','
            << num(r.fitted_slope) << ',' << num(r.r_squared) << ',' << num(r.envelope_ratio) << ','
            << (r.outside_theory ? "true" : "false") << ',' << r.status << '\n';
    }
}

int cmd_sweep(const std::string& sweep_path, const std::optional<std::string>& output_dir, unsigned threads,
              std::ostream& out, std::ostream& err)
{
    const SweepPlan plan = parse_sweep(parse_entries_file(sweep_path));
    const auto expanded = plan.expand();

    std::vector<RunConfig> configs;
    for (std::size_t i = 0; i < expanded.size(); ++i) {
        try {
            configs.push_back(build_run_config(expanded[i]));
        } catch (const ParseError& e) {
            throw ParseError("run " + std::to_string(i) + ": " + e.what(), e.line(), e.field());
        }
    }
    const fs::path root = output_dir.value_or(configs.front().output_dir);
    fs::create_directories(root);

    const int width = std::max<int>(3, static_cast<int>(std::to_string(configs.size() - 1).size()));
    for (std::size_t i = 0; i < configs.size(); ++i) {
        std::ostringstream name;
        name << configs[i].label << '_' << std::setw(width) << std::setfill('0') << i;
        configs[i].label = name.str();
    }

    std::vector<RunSummary> rows(configs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            try {
                rows[i] = run_simulation(configs[i], root / configs[i].label);
            } catch (const std::exception& e) {
                RunSummary failed;
                failed.label = configs[i].label;
                failed.p = configs[i].solver.p;
                failed.exit_code = exit_code_for(e);
                failed.status = "error";
                failed.message = describe_error(e);
                rows[i] = failed;
            }
        }
    };
    const unsigned n_threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(configs.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    {
        auto csv = open_out(root / "summary.csv");
        write_summary_csv(csv, rows);
    }

    int code = kExitOk;
    for (const auto& r : rows) {
        out << r.label << ": " << r.status << '\n';
        if (r.exit_code != kExitOk) {
            err << r.label << ": " << r.message << '\n';
            if (code == kExitOk) code = r.exit_code;
        }
    }
    out << "summary: " << (root / "summary.csv").string() << '\n';
    return code;
}

}  // namespace pwave::cli
