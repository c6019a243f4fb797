// goalstep: adaptive time integration experiments from the command line.
//
//   goalstep run   --problem toy --density u2 --variant goal --tau 1e-6
//   goalstep sweep --problem toy --density u2 --tau 1e-4 --tau 1e-5 --tau 1e-6
//   goalstep dwr   --problem toy --density u1 --tau 1e-6
//   goalstep check

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "goalstep/cli.hpp"
#include "goalstep/errors.hpp"

namespace {

using goalstep::cli::ExperimentConfig;

// Flag values that were given explicitly; they override the config file.
struct Overrides {
    std::string config;
    std::optional<std::string> problem, scheme, density, quadrature, variant, norm, out;
    std::optional<double> k, a, gamma, c, te, f_min, f_max, refine_fraction;
    std::optional<int> n_cells, p_hat;
    std::optional<unsigned> jobs;
    std::optional<std::size_t> max_steps, initial_cells, max_iterations;
    std::vector<double> taus;
    bool no_limiter = false;
    bool store_trajectory = false;
};

void add_experiment_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "flat JSON config file (flags override its keys)");
    cmd->add_option("--problem", o.problem, "toy | convdiff-fwd | convdiff-bwd");
    cmd->add_option("--k", o.k, "stiffness of the toy problem (k < 0)");
    cmd->add_option("--a", o.a, "convection speed");
    cmd->add_option("--gamma", o.gamma, "diffusivity");
    cmd->add_option("--c", o.c, "Robin boundary coefficient");
    cmd->add_option("--n_cells,--n-cells", o.n_cells, "cells of the 1-D grid");
    cmd->add_option("--te", o.te, "end time of the convection-diffusion problem");
    cmd->add_option("--scheme", o.scheme, "theta | rk4");
    cmd->add_option("--density", o.density, "density label, e.g. u1, u2, t*u1, window");
    cmd->add_option("--quadrature", o.quadrature, "trapezoid | simpson");
    cmd->add_option("--variant", o.variant, "goal | classic");
    cmd->add_option("--tau", o.taus, "tolerance (repeatable)");
    cmd->add_flag("--no-limiter", o.no_limiter, "disable the step-ratio limiter");
    cmd->add_option("--norm", o.norm, "euclidean | max (classic estimator)");
    cmd->add_option("--p_hat,--p-hat", o.p_hat, "override the companion order");
    cmd->add_option("--f_min,--f-min", o.f_min, "lower step-ratio bound");
    cmd->add_option("--f_max,--f-max", o.f_max, "upper step-ratio bound");
    cmd->add_option("--out", o.out, "output CSV path (default stdout)");
    cmd->add_option("--jobs", o.jobs, "parallel sweep workers");
    cmd->add_flag("--store-trajectory,--store_trajectory", o.store_trajectory,
                  "append states to the per-step CSV");
    cmd->add_option("--max_steps,--max-steps", o.max_steps, "step-count guard");
    cmd->add_option("--refine_fraction,--refine-fraction", o.refine_fraction,
                    "DWR fixed-rate fraction");
    cmd->add_option("--initial_cells,--initial-cells", o.initial_cells, "DWR initial cells");
    cmd->add_option("--max_iterations,--max-iterations", o.max_iterations,
                    "DWR iteration budget");
}

template <typename T, typename U>
void apply(const std::optional<T>& v, U& target) {
    if (v) target = *v;
}

ExperimentConfig resolve(const Overrides& o) {
    ExperimentConfig cfg;
    if (!o.config.empty()) goalstep::cli::merge_config_file(cfg, o.config);
    apply(o.problem, cfg.problem.id);
    apply(o.k, cfg.problem.k);
    apply(o.a, cfg.problem.convdiff.a);
    apply(o.gamma, cfg.problem.convdiff.gamma);
    apply(o.c, cfg.problem.convdiff.c);
    apply(o.n_cells, cfg.problem.convdiff.grid.n_cells);
    if (o.te) cfg.problem.convdiff.te = *o.te;
    apply(o.scheme, cfg.scheme);
    apply(o.density, cfg.density);
    if (o.quadrature) cfg.quadrature = *o.quadrature;
    apply(o.variant, cfg.variant);
    if (!o.taus.empty()) cfg.taus = o.taus;
    if (o.no_limiter) cfg.limiter = false;
    apply(o.norm, cfg.norm);
    if (o.p_hat) cfg.p_hat = *o.p_hat;
    apply(o.f_min, cfg.f_min);
    apply(o.f_max, cfg.f_max);
    apply(o.out, cfg.out);
    apply(o.jobs, cfg.jobs);
    if (o.store_trajectory) cfg.store_trajectory = true;
    apply(o.max_steps, cfg.max_steps);
    apply(o.refine_fraction, cfg.refine_fraction);
    apply(o.initial_cells, cfg.initial_cells);
    apply(o.max_iterations, cfg.max_iterations);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    namespace cli = goalstep::cli;

    CLI::App app{"Goal-oriented and classic adaptive time integration experiments"};
    app.require_subcommand(1);

    Overrides run_o, sweep_o, dwr_o;
    double tamper = 0.0;
    CLI::App* run = app.add_subcommand("run", "single adaptive run; per-step CSV + summary");
    CLI::App* sweep = app.add_subcommand("sweep", "tolerance sweep with fitted convergence slope");
    CLI::App* dwr = app.add_subcommand("dwr", "dual-weighted-residual refinement loop");
    CLI::App* check = app.add_subcommand("check", "built-in verification battery");
    add_experiment_flags(run, run_o);
    add_experiment_flags(sweep, sweep_o);
    add_experiment_flags(dwr, dwr_o);
    check->add_option("--tamper-bstar", tamper, "perturb the first midpoint weight")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kExitConfig;
    }

    try {
        if (*run) return cli::cmd_run(resolve(run_o), std::cout, std::cerr);
        if (*sweep) return cli::cmd_sweep(resolve(sweep_o), std::cout, std::cerr);
        if (*dwr) return cli::cmd_dwr(resolve(dwr_o), std::cout, std::cerr);
        if (*check) return cli::cmd_check(std::cout, tamper);
    } catch (const goalstep::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return cli::kExitConfig;
    } catch (const goalstep::Error& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return cli::kExitRuntime;
    }
    return cli::kExitConfig;
}
