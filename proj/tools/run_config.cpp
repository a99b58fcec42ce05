#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "pwave/constraints.hpp"
#include "pwave/envelope.hpp"
#include "pwave/errors.hpp"

namespace pwave::cli {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(trim(item));
    return out;
}

// Typed access to config entries; remembers which keys were read.
class Reader {
public:
    explicit Reader(const ConfigEntries& e) : entries_(e) {}

    bool has(const std::string& key) const { return entries_.values.count(key) > 0; }

    int line(const std::string& key) const
    {
        auto it = entries_.values.find(key);
        return it == entries_.values.end() ? 0 : it->second.line;
    }

    std::optional<std::string> text(const std::string& key)
    {
        auto it = entries_.values.find(key);
        if (it == entries_.values.end()) return std::nullopt;
        used_.insert(key);
        return it->second.value;
    }

    std::optional<double> number(const std::string& key)
    {
        auto s = text(key);
        if (!s) return std::nullopt;
        return parse_number(*s, key);
    }

    double number(const std::string& key, double fallback) { return number(key).value_or(fallback); }

    std::optional<long> integer(const std::string& key)
    {
        auto s = text(key);
        if (!s) return std::nullopt;
        long v = 0;
        const auto* end = s->data() + s->size();
        auto [ptr, ec] = std::from_chars(s->data(), end, v);
        if (ec != std::errc() || ptr != end) fail(key, "expected an integer, got '" + *s + "'");
        return v;
    }

    bool flag(const std::string& key, bool fallback)
    {
        auto s = text(key);
        if (!s) return fallback;
        if (*s == "true" || *s == "1" || *s == "yes" || *s == "on") return true;
        if (*s == "false" || *s == "0" || *s == "no" || *s == "off") return false;
        fail(key, "expected true or false, got '" + *s + "'");
    }

    double parse_number(const std::string& s, const std::string& key) const
    {
        double v = 0;
        const auto* end = s.data() + s.size();
        auto [ptr, ec] = std::from_chars(s.data(), end, v);
        if (ec != std::errc() || ptr != end) fail(key, "expected a number, got '" + s + "'");
        return v;
    }

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const
    {
        throw ParseError(key + ": " + msg, line(key), key);
    }

    void reject_unused() const
    {
        for (const auto& key : entries_.order)
            if (!used_.count(key)) fail(key, "unknown key");
    }

private:
    const ConfigEntries& entries_;
    std::set<std::string> used_;
};

InitialShape parse_shape(Reader& r, const std::string& key, const std::string& amp_key, InitialShape fallback)
{
    const double amplitude = r.number(amp_key, 1.0);
    auto spec = r.text(key);
    if (!spec) {
        fallback.amplitude = amplitude;
        return fallback;
    }
    const auto colon = spec->find(':');
    const std::string kind = trim(spec->substr(0, colon));
    const std::string arg = colon == std::string::npos ? std::string{} : trim(spec->substr(colon + 1));
    if (kind == "zero") return InitialShape::zero();
    if (kind == "bump") return InitialShape::bump(amplitude);
    if (kind == "sine") {
        long mode = 1;
        if (!arg.empty()) {
            const auto* end = arg.data() + arg.size();
            auto [ptr, ec] = std::from_chars(arg.data(), end, mode);
            if (ec != std::errc() || ptr != end || mode < 1) r.fail(key, "sine mode must be a positive integer");
        }
        return InitialShape::sine(static_cast<int>(mode), amplitude);
    }
    if (kind == "table") {
        std::vector<double> values;
        for (const auto& item : split(arg, ',')) values.push_back(r.parse_number(item, key));
        if (values.size() < 2) r.fail(key, "table needs at least two values");
        return InitialShape::from_table(std::move(values), amplitude);
    }
    r.fail(key, "expected zero, bump, sine[:n] or table:v0,v1,...");
}

std::vector<std::pair<double, double>> parse_knots(Reader& r, const std::string& key, const std::string& text)
{
    std::vector<std::pair<double, double>> knots;
    for (const auto& item : split(text, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) r.fail(key, "knots are written t:L, got '" + item + "'");
        knots.emplace_back(r.parse_number(trim(item.substr(0, colon)), key),
                           r.parse_number(trim(item.substr(colon + 1)), key));
    }
    return knots;
}

const std::map<std::string, std::string>& sweep_aliases()
{
    static const std::map<std::string, std::string> aliases = {
        {"p", "solver.p"},
        {"m", "trajectory.m"},
        {"gamma", "trajectory.gamma"},
        {"k", "trajectory.k"},
        {"alpha", "analysis.alpha"},
        {"exponent", "trajectory.exponent"},
    };
    return aliases;
}

}  // namespace

void ConfigEntries::set(const std::string& key, std::string value, int line)
{
    if (!values.count(key)) order.push_back(key);
    values[key] = {std::move(value), line};
}

ConfigEntries parse_entries(std::istream& in)
{
    ConfigEntries out;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value", line_no);
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ParseError("empty key", line_no);
        if (out.values.count(key))
            throw ParseError(key + ": duplicate key (first set on line " +
                                 std::to_string(out.values[key].line) + ")",
                             line_no, key);
        out.set(key, trim(line.substr(eq + 1)), line_no);
    }
    return out;
}

ConfigEntries parse_entries_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'", 0);
    return parse_entries(in);
}

RunConfig build_run_config(const ConfigEntries& entries)
{
    Reader r(entries);
    RunConfig rc;
    SolverConfig& s = rc.solver;

    s.p = r.number("solver.p", 2.0);
    if (auto n = r.integer("solver.N")) s.N = *n;
    s.dt = r.number("solver.dt", s.dt);
    s.t_end = r.number("solver.t_end", s.t_end);
    s.eps_reg = r.number("solver.eps_reg", s.eps_reg);
    s.newton_tol = r.number("solver.newton_tol", s.newton_tol);
    if (auto n = r.integer("solver.newton_max_iter")) s.newton_max_iter = static_cast<int>(*n);
    if (auto n = r.integer("solver.sample_every")) s.sample_every = static_cast<int>(*n);
    if (auto n = r.integer("solver.state_every")) s.state_every = static_cast<int>(*n);
    if (auto n = r.integer("solver.max_halvings")) s.max_halvings = static_cast<int>(*n);
    s.initial_profile = parse_shape(r, "solver.initial_profile", "solver.initial_amplitude", InitialShape::sine(1));
    s.initial_velocity = parse_shape(r, "solver.initial_velocity", "solver.velocity_amplitude", InitialShape::zero());

    TrajectorySpec& ts = rc.trajectory;
    ts.family = r.text("trajectory.family").value_or("constant");
    ts.k = r.number("trajectory.k", ts.k);
    ts.gamma = r.number("trajectory.gamma", ts.gamma);
    ts.m = r.number("trajectory.m", ts.m);
    ts.L0 = r.number("trajectory.L0", ts.L0);
    ts.exponent = r.number("trajectory.exponent", ts.exponent);
    ts.t_max = r.number("trajectory.t_max");
    if (auto t = r.text("trajectory.table")) ts.table = parse_knots(r, "trajectory.table", *t);

    const double t_max = ts.t_max.value_or(s.t_end);
    try {
        if (ts.family == "powerlaw")
            s.traj = DomainTrajectory::power_law(ts.k, ts.gamma, ts.m, t_max);
        else if (ts.family == "constant")
            s.traj = DomainTrajectory::constant(ts.L0, t_max);
        else if (ts.family == "growth")
            s.traj = DomainTrajectory::growth(ts.k, ts.exponent, t_max);
        else if (ts.family == "tabulated")
            s.traj = DomainTrajectory::tabulated(ts.table);
        else
            r.fail("trajectory.family", "expected powerlaw, constant, growth or tabulated, got '" + ts.family + "'");
    } catch (const ArgumentError& e) {
        r.fail(r.has("trajectory.family") ? "trajectory.family" : "trajectory", e.what());
    } catch (const DomainError& e) {
        r.fail("trajectory", e.what());
    }

    AnalysisConfig& a = rc.analysis;
    a.check_embeddings = r.flag("analysis.check_embeddings", a.check_embeddings);
    a.komornik = r.flag("analysis.komornik", a.komornik);
    a.komornik_q = r.number("analysis.komornik.q");
    a.weight = r.text("analysis.weight").value_or(a.weight);
    if (a.weight != "auto" && a.weight != "power_shift" && a.weight != "identity")
        r.fail("analysis.weight", "expected auto, power_shift or identity");
    a.weight_k = r.number("analysis.weight.k", ts.k);
    a.weight_gamma = r.number("analysis.weight.gamma", ts.gamma);
    a.fit_envelope = r.text("analysis.fit_envelope").value_or(a.fit_envelope);
    if (a.fit_envelope != "auto" && a.fit_envelope != "none") {
        try {
            envelope_kind_from_string(a.fit_envelope);
        } catch (const ArgumentError& e) {
            r.fail("analysis.fit_envelope", e.what());
        }
    }
    a.fit_t_lo = r.number("analysis.fit.t_lo");
    a.fit_t_hi = r.number("analysis.fit.t_hi");
    a.constraints = r.flag("analysis.constraints", a.constraints);
    a.alpha = r.number("analysis.alpha");
    a.plots = r.flag("analysis.plots", a.plots);
    if (a.komornik_q && !(*a.komornik_q >= 0)) r.fail("analysis.komornik.q", "must be >= 0");
    if (a.constraints && ts.family != "powerlaw")
        r.fail("analysis.constraints", "constraint certification needs trajectory.family=powerlaw");
    if (a.constraints) {
        try {
            ParameterSet{s.p, a.alpha_for(s.p), ts.m, ts.k, ts.gamma}.validate();
        } catch (const ArgumentError& e) {
            r.fail(r.has("analysis.alpha") ? "analysis.alpha" : "analysis.constraints", e.what());
        }
    }

    rc.output_dir = r.text("run.output_dir").value_or(rc.output_dir);
    rc.label = r.text("run.label").value_or(rc.label);

    r.reject_unused();

    try {
        s.validate();
    } catch (const ArgumentError& e) {
        const std::string msg = e.what();
        const std::string key = msg.rfind("solver.", 0) == 0 ? msg.substr(0, msg.find(' ')) : "solver";
        throw ParseError(msg, r.line(key), key);
    }

    for (const auto& key : entries.order) rc.snapshot[key] = entries.values.at(key).value;
    return rc;
}

RunConfig load_run_config(const std::string& path)
{
    return build_run_config(parse_entries_file(path));
}

SweepPlan parse_sweep(const ConfigEntries& entries)
{
    SweepPlan plan;
    for (const auto& key : entries.order) {
        const auto& entry = entries.values.at(key);
        if (key.rfind("sweep.", 0) != 0) {
            plan.base.set(key, entry.value, entry.line);
            continue;
        }
        std::string target = key.substr(6);
        if (auto it = sweep_aliases().find(target); it != sweep_aliases().end()) target = it->second;
        auto values = split(entry.value, ',');
        values.erase(std::remove(values.begin(), values.end(), std::string{}), values.end());
        if (values.empty()) throw ParseError(key + ": empty value list", entry.line, key);
        for (const auto& [existing, _] : plan.axes)
            if (existing == target) throw ParseError(key + ": axis swept twice", entry.line, key);
        plan.axes.emplace_back(target, std::move(values));
    }
    for (const auto& [target, _] : plan.axes) {
        if (plan.base.values.count(target))
            throw ParseError(target + ": set both directly and by a sweep axis", plan.base.values[target].line, target);
    }
    return plan;
}

std::vector<ConfigEntries> SweepPlan::expand() const
{
    std::vector<ConfigEntries> runs{base};
    for (const auto& [key, values] : axes) {
        std::vector<ConfigEntries> next;
        for (const auto& run : runs) {
            for (const auto& v : values) {
                ConfigEntries e = run;
                e.set(key, v);
                next.push_back(std::move(e));
            }
        }
        runs = std::move(next);
    }
    return runs;
}

}  // namespace pwave::cli
