#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pwave/solver.hpp"

namespace pwave::cli {

/// One `key=value` line of a config file.
struct ConfigEntry {
    std::string value;
    int line = 0;
};

/// Parsed config text: dotted keys in file order plus a lookup table.
struct ConfigEntries {
    std::vector<std::string> order;
    std::map<std::string, ConfigEntry> values;

    void set(const std::string& key, std::string value, int line = 0);
};

/// Reads flat `key=value` lines. `#` starts a comment; blank lines are skipped.
/// Throws ParseError (with line and field) on malformed lines or duplicate keys.
ConfigEntries parse_entries(std::istream& in);
ConfigEntries parse_entries_file(const std::string& path);

struct AnalysisConfig {
    bool check_embeddings = true;
    bool komornik = true;
    std::optional<double> komornik_q;     // default beta = (p - 2)/p
    std::string weight = "auto";          // auto, power_shift, identity
    double weight_k = 1.0;
    double weight_gamma = 0.5;
    std::string fit_envelope = "auto";    // auto, none, poly_phi, exp_phi, poly_t, exp_t
    std::optional<double> fit_t_lo;
    std::optional<double> fit_t_hi;
    bool constraints = false;
    std::optional<double> alpha;          // default 2/3 for p = 2, 1/2 otherwise
    bool plots = true;

    double alpha_for(double p) const { return alpha.value_or(p == 2.0 ? 2.0 / 3.0 : 0.5); }
};

struct TrajectorySpec {
    std::string family = "constant";
    double k = 1.0;
    double gamma = 0.5;
    double m = 2.0;
    double L0 = 1.0;
    double exponent = 0.5;
    std::vector<std::pair<double, double>> table;
    std::optional<double> t_max;
};

struct RunConfig {
    SolverConfig solver;
    TrajectorySpec trajectory;
    AnalysisConfig analysis;
    std::string output_dir = "run";
    std::string label = "run";
    /// Every key=value the run was built from, sorted by key.
    std::map<std::string, std::string> snapshot;
};

/// Builds a validated RunConfig. Unknown keys, unparsable values and violated
/// invariants throw ParseError naming the line and key.
RunConfig build_run_config(const ConfigEntries& entries);
RunConfig load_run_config(const std::string& path);

/// A sweep file is a run config plus `sweep.<key>=v1,v2,...` lists. Short keys
/// p, m, gamma, k, alpha map to solver.p, trajectory.m, trajectory.gamma,
/// trajectory.k and analysis.alpha.
struct SweepPlan {
    ConfigEntries base;
    std::vector<std::pair<std::string, std::vector<std::string>>> axes;

    /// Cartesian product of the axes in file order, last axis fastest.
    std::vector<ConfigEntries> expand() const;
};

SweepPlan parse_sweep(const ConfigEntries& entries);

}  // namespace pwave::cli
