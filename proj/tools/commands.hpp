#pragma once

#include <cstddef>
#include <exception>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pwave/constraints.hpp"
#include "run_config.hpp"

namespace pwave::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitConfig = 2,
    kExitBlowup = 3,
    kExitHypothesis = 4,
};

/// Config and input errors -> 2, blow-up and step failure -> 3, analysis
/// hypothesis violations and degenerate data -> 4, anything else -> 1.
int exit_code_for(const std::exception& e);

/// One-line diagnostic: line/field for parse errors, failure time for solver
/// errors, the condition name for hypothesis violations.
std::string describe_error(const std::exception& e);

struct RunSummary {
    std::string label;
    int exit_code = kExitOk;
    std::string status = "ok";  // ok, blowup, hypothesis:<condition>, error
    std::string message;
    double p = 0.0;
    std::optional<double> m;
    std::optional<double> gamma;
    double fitted_slope = std::numeric_limits<double>::quiet_NaN();
    double r_squared = std::numeric_limits<double>::quiet_NaN();
    double envelope_ratio = std::numeric_limits<double>::quiet_NaN();
    bool outside_theory = false;
};

/// Runs the solver and every configured analysis, writing into `dir`:
/// trace.csv, trace_bound.csv, run.json, embeddings.jsonl, komornik.json,
/// envelope.json, constraints.json and SVG plots, as configured.
RunSummary run_simulation(const RunConfig& rc, const std::filesystem::path& dir);

int cmd_simulate(const std::string& config_path, const std::optional<std::string>& output_dir, std::ostream& out,
                 std::ostream& err);

int cmd_check_constraints(const ParameterSet& params, double t_max, std::size_t grid_points,
                          const std::optional<std::string>& json_path, std::ostream& out);

struct WeightArgs {
    std::string kind = "identity";  // identity or power_shift
    double k = 1.0;
    double gamma = 0.5;
};

int cmd_komornik(const std::string& trace_path, double q, const WeightArgs& weight,
                 const std::optional<std::string>& json_path, std::ostream& out, std::ostream& err);

struct FitArgs {
    std::string kind;
    double k = 1.0;
    double gamma = 0.5;
    double p = 2.0;
    std::optional<double> t_lo;
    std::optional<double> t_hi;
};

int cmd_fit(const std::string& trace_path, const FitArgs& args, const std::optional<std::string>& json_path,
            std::ostream& out);

/// PWAVE_THREADS when set to a positive integer, otherwise the hardware count.
unsigned sweep_threads();

int cmd_sweep(const std::string& sweep_path, const std::optional<std::string>& output_dir, unsigned threads,
              std::ostream& out, std::ostream& err);

/// Header and one row per run, in run order.
void write_summary_csv(std::ostream& out, const std::vector<RunSummary>& rows);

}  // namespace pwave::cli
