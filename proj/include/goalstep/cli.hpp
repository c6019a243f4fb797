#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "goalstep/driver.hpp"
#include "goalstep/problems.hpp"

namespace goalstep::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitConfig = 2,
    kExitNonConvergence = 3,
    kExitRuntime = 4,
};

/// Everything a command needs. Loaded from a flat JSON object whose keys
/// match the command-line flags; flags override file values.
struct ExperimentConfig {
    ProblemSpec problem{};
    std::string scheme = "theta";
    std::string density = "u2";
    std::optional<std::string> quadrature;  // trapezoid for theta, simpson for rk4
    std::string variant = "goal";
    std::vector<double> taus{1e-6};
    bool limiter = true;
    std::string norm = "euclidean";
    std::optional<int> p_hat;
    double f_min = 0.01;
    double f_max = 3.0;
    std::string out;  // empty: stdout
    unsigned jobs = 1;
    bool store_trajectory = false;
    std::size_t max_steps = 10'000'000;
    double refine_fraction = 0.8;
    std::size_t initial_cells = 10;
    std::size_t max_iterations = 40;

    std::string quadrature_id() const;
};

/// Applies the keys of a flat JSON object; unknown keys or wrong types
/// throw ConfigError.
void merge_config_json(ExperimentConfig& cfg, const std::string& json_text);
void merge_config_file(ExperimentConfig& cfg, const std::string& path);

/// Summary line written after a run: tau,n_steps,J_h,err_J,err_sol_te,wall_ms.
struct SummaryRow {
    double tau = 0.0;
    std::size_t n_steps = 0;
    double J_h = 0.0;
    std::optional<double> e_J;
    std::optional<double> e_sol_te;
    double wall_ms = 0.0;
};

inline constexpr const char* kSummaryHeader = "tau,n_steps,J_h,err_J,err_sol_te,wall_ms";
inline constexpr const char* kStepHeader = "t,dt,est,zero_flag";
inline constexpr const char* kSweepHeader = "tau,n_steps,J_h,err_J,err_sol_te,wall_ms";
inline constexpr const char* kDwrHeader = "iter,cells,eta,J_h,err_J";

std::string format_summary_row(const RunReport& report);
SummaryRow parse_summary_row(const std::string& line);

/// Round-trip exact decimal form of a double.
std::string format_double(double v);

int cmd_run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_dwr(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
/// `tamper_bstar` is added to the first midpoint weight (negative control).
int cmd_check(std::ostream& out, double tamper_bstar = 0.0);

}  // namespace goalstep::cli
