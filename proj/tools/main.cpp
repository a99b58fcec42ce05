#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

#ifndef PWAVE_VERSION
#define PWAVE_VERSION "unknown"
#endif

using namespace pwave::cli;

int main(int argc, char** argv)
{
    CLI::App app{"Damped p-Laplacian wave simulator and decay-theory verifier", "pwave"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> output_dir;
    auto* simulate = app.add_subcommand("simulate", "Run one simulation and its analyses from a config file");
    simulate->add_option("config", config_path, "key=value config file")->required();
    simulate->add_option("-o,--output-dir", output_dir, "Override run.output_dir");

    pwave::ParameterSet params{2.0, 2.0 / 3.0, 2.0, 1.0, 0.5};
    double t_max = 1e4;
    std::size_t grid_points = 2000;
    std::optional<std::string> json_path;
    auto* constraints = app.add_subcommand("check-constraints", "Admissible-parameter thresholds and condition sups");
    constraints->add_option("--p", params.p, "Nonlinearity exponent")->required();
    constraints->add_option("--alpha", params.alpha, "Splitting exponent")->required();
    constraints->add_option("--m", params.m, "Growth exponent")->required();
    constraints->add_option("--k", params.k, "Rate k")->capture_default_str();
    constraints->add_option("--gamma", params.gamma, "Weight exponent gamma")->capture_default_str();
    constraints->add_option("--t-max", t_max, "Certification horizon")->capture_default_str();
    constraints->add_option("--grid-points", grid_points, "Certification grid size")->capture_default_str();
    constraints->add_option("--json", json_path, "Write the JSON report here instead of stdout");

    std::string trace_path;
    double q = 0.0;
    WeightArgs weight;
    auto* komornik = app.add_subcommand("komornik", "Estimate the integral-inequality constant of a trace");
    komornik->add_option("trace", trace_path, "Trace CSV (t,E,D,L,residual)")->required();
    komornik->add_option("--q", q, "Inequality exponent q >= 0")->capture_default_str();
    komornik->add_option("--weight", weight.kind, "identity or power_shift")->capture_default_str();
    komornik->add_option("--k", weight.k, "power_shift rate")->capture_default_str();
    komornik->add_option("--gamma", weight.gamma, "power_shift exponent")->capture_default_str();
    komornik->add_option("--json", json_path, "Also write the full report (with S grid) here");

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "Fit a decay envelope to a trace");
    fit->add_option("trace", trace_path, "Trace CSV")->required();
    fit->add_option("--kind", fit_args.kind, "poly_phi, exp_phi, poly_t or exp_t")->required();
    fit->add_option("--p", fit_args.p, "Nonlinearity exponent")->capture_default_str();
    fit->add_option("--k", fit_args.k, "Weight rate k")->capture_default_str();
    fit->add_option("--gamma", fit_args.gamma, "Weight exponent gamma")->capture_default_str();
    fit->add_option("--t-lo", fit_args.t_lo, "Fit window start (default t_end/4)");
    fit->add_option("--t-hi", fit_args.t_hi, "Fit window end (default t_end)");
    fit->add_option("--json", json_path, "Also write the envelope JSON here");

    std::string sweep_path;
    auto* sweep = app.add_subcommand("sweep", "Run a parameter grid in parallel");
    sweep->add_option("sweep_file", sweep_path, "Config with sweep.<key>=v1,v2,... lines")->required();
    sweep->add_option("-o,--output-dir", output_dir, "Override run.output_dir");

    app.add_subcommand("version", "Print the version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*simulate) return cmd_simulate(config_path, output_dir, std::cout, std::cerr);
        if (*constraints) return cmd_check_constraints(params, t_max, grid_points, json_path, std::cout);
        if (*komornik) return cmd_komornik(trace_path, q, weight, json_path, std::cout, std::cerr);
        if (*fit) return cmd_fit(trace_path, fit_args, json_path, std::cout);
        if (*sweep) return cmd_sweep(sweep_path, output_dir, sweep_threads(), std::cout, std::cerr);
        std::cout << "pwave " << PWAVE_VERSION << '\n';
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << describe_error(e) << '\n';
        return exit_code_for(e);
    }
}
