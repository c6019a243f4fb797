#include "goalstep/cli.hpp"

#include <charconv>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "goalstep/analysis.hpp"
#include "goalstep/dwr.hpp"
#include "goalstep/errors.hpp"
#include "goalstep/verification.hpp"

namespace goalstep::cli {

namespace {

using nlohmann::json;

template <typename T>
T get_as(const json& v, const std::string& key) {
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type");
    }
}

std::string format_optional(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string{};
}

std::optional<double> parse_optional(const std::string& field) {
    if (field.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ConfigError("cannot parse number '" + field + "'");
    }
    return v;
}

// Output sink: the configured file, or the fallback stream.
class Sink {
  public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw ConfigError("cannot open output file '" + path + "'");
            stream_ = file_.get();
        }
    }
    std::ostream& get() { return *stream_; }
    bool is_file() const { return file_ != nullptr; }

  private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

// Objects assembled from a config, shared by the commands.
struct Setup {
    IvpProblem problem;
    SchemePair pair;
    QuadratureRule rule;
    ControllerConfig controller;
    std::string density_label;
    std::optional<double> J_ref;

    const DensityFunction& density() const { return problem.density(density_label); }
};

Setup build_setup(const ExperimentConfig& cfg) {
    Setup s;
    s.problem = make_problem(cfg.problem);
    s.pair = scheme_by_id(cfg.scheme);
    s.rule = quadrature_by_id(cfg.quadrature_id());
    s.density_label = cfg.density;
    (void)s.density();  // throws for unknown labels
    s.controller.variant = variant_by_id(cfg.variant);
    s.controller.norm = norm_by_id(cfg.norm);
    s.controller.p_hat = cfg.p_hat.value_or(s.pair.companion_order());
    s.controller.f_min = cfg.f_min;
    s.controller.f_max = cfg.f_max;
    s.controller.limiter_enabled = cfg.limiter;
    if (cfg.taus.empty()) throw ConfigError("at least one tolerance is required");
    s.controller.tau = cfg.taus.front();
    s.controller.validate();
    check_pairing(s.pair, s.rule);
    s.J_ref = reference_qoi(cfg.problem, cfg.density);
    return s;
}

}  // namespace

std::string ExperimentConfig::quadrature_id() const {
    if (quadrature) return *quadrature;
    return scheme == "rk4" ? "simpson" : "trapezoid";
}

void merge_config_json(ExperimentConfig& cfg, const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid config JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");

    for (const auto& [key, v] : doc.items()) {
        if (key == "problem") cfg.problem.id = get_as<std::string>(v, key);
        else if (key == "k") cfg.problem.k = get_as<double>(v, key);
        else if (key == "a") cfg.problem.convdiff.a = get_as<double>(v, key);
        else if (key == "gamma") cfg.problem.convdiff.gamma = get_as<double>(v, key);
        else if (key == "c") cfg.problem.convdiff.c = get_as<double>(v, key);
        else if (key == "n_cells") cfg.problem.convdiff.grid.n_cells = get_as<int>(v, key);
        else if (key == "te") cfg.problem.convdiff.te = get_as<double>(v, key);
        else if (key == "scheme") cfg.scheme = get_as<std::string>(v, key);
        else if (key == "density") cfg.density = get_as<std::string>(v, key);
        else if (key == "quadrature") cfg.quadrature = get_as<std::string>(v, key);
        else if (key == "variant") cfg.variant = get_as<std::string>(v, key);
        else if (key == "tau") {
            cfg.taus = v.is_array() ? get_as<std::vector<double>>(v, key)
                                    : std::vector<double>{get_as<double>(v, key)};
        } else if (key == "limiter") cfg.limiter = get_as<bool>(v, key);
        else if (key == "norm") cfg.norm = get_as<std::string>(v, key);
        else if (key == "p_hat") cfg.p_hat = get_as<int>(v, key);
        else if (key == "f_min") cfg.f_min = get_as<double>(v, key);
        else if (key == "f_max") cfg.f_max = get_as<double>(v, key);
        else if (key == "out") cfg.out = get_as<std::string>(v, key);
        else if (key == "jobs") cfg.jobs = get_as<unsigned>(v, key);
        else if (key == "store_trajectory") cfg.store_trajectory = get_as<bool>(v, key);
        else if (key == "max_steps") cfg.max_steps = get_as<std::size_t>(v, key);
        else if (key == "refine_fraction") cfg.refine_fraction = get_as<double>(v, key);
        else if (key == "initial_cells") cfg.initial_cells = get_as<std::size_t>(v, key);
        else if (key == "max_iterations") cfg.max_iterations = get_as<std::size_t>(v, key);
        else throw ConfigError("unknown config key '" + key + "'");
    }
}

void merge_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    merge_config_json(cfg, buf.str());
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ec == std::errc{} ? ptr : buf);
}

std::string format_summary_row(const RunReport& report) {
    std::ostringstream s;
    s << format_double(report.tau) << ',' << report.n_steps << ',' << format_double(report.J_h)
      << ',' << format_optional(report.e_J) << ',' << format_optional(report.e_sol_te) << ','
      << format_double(report.wall_time * 1e3);
    return s.str();
}

SummaryRow parse_summary_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (fields.size() != 6) throw ConfigError("summary row needs 6 fields: '" + line + "'");
    SummaryRow row;
    row.tau = parse_optional(fields[0]).value_or(0.0);
    row.n_steps = static_cast<std::size_t>(std::stoull(fields[1]));
    row.J_h = parse_optional(fields[2]).value_or(0.0);
    row.e_J = parse_optional(fields[3]);
    row.e_sol_te = parse_optional(fields[4]);
    row.wall_ms = parse_optional(fields[5]).value_or(0.0);
    return row;
}

int cmd_run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    Setup s;
    try {
        s = build_setup(cfg);
    } catch (const Error& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    if (cfg.taus.size() != 1) {
        err << "config error: run takes exactly one tolerance\n";
        return kExitConfig;
    }

    DriverOptions opts;
    opts.J_ref = s.J_ref;
    opts.max_steps = cfg.max_steps;
    opts.store_states = cfg.store_trajectory;
    RunReport report;
    bool resource_failure = false;
    std::string resource_msg;
    try {
        report = adaptive_solve(s.problem, s.pair, s.density(), s.rule, s.controller, opts);
    } catch (const ResourceError& e) {
        resource_failure = true;
        resource_msg = e.what();
    } catch (const Error& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    if (resource_failure) {
        err << "runtime error: " << resource_msg << '\n';
        return kExitRuntime;
    }

    Sink sink(cfg.out, out);
    std::ostream& csv = sink.get();
    csv << kStepHeader;
    if (cfg.store_trajectory) {
        for (Eigen::Index i = 0; i < s.problem.dimension(); ++i) csv << ",u" << i;
    }
    csv << '\n';
    for (std::size_t n = 0; n < report.steps.size(); ++n) {
        const StepRecord& st = report.steps[n];
        csv << format_double(st.t) << ',' << format_double(st.dt) << ',' << format_double(st.est)
            << ',' << (st.zero_flag ? 1 : 0);
        if (cfg.store_trajectory) {
            const Vector& u = report.states[n + 1];
            for (Eigen::Index i = 0; i < u.size(); ++i) csv << ',' << format_double(u(i));
        }
        csv << '\n';
    }
    const std::string summary = format_summary_row(report);
    csv << "# " << kSummaryHeader << '\n' << "# " << summary << '\n';
    if (!report.ok()) csv << "# failure: " << report.failure << '\n';
    if (report.any_zero_estimate) csv << "# zero estimates occurred\n";
    if (sink.is_file()) {
        out << kSummaryHeader << '\n' << summary << '\n';
    }
    if (!report.ok()) {
        err << "runtime error: " << report.failure << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.taus.size() < 2) {
        err << "config error: a sweep needs at least two tolerances\n";
        return kExitConfig;
    }
    Setup s;
    SweepResult result;
    try {
        s = build_setup(cfg);
        SweepOptions opts;
        opts.J_ref = s.J_ref;
        opts.jobs = cfg.jobs;
        opts.max_steps = cfg.max_steps;
        result = sweep(s.problem, s.pair, s.density(), s.rule, s.controller, cfg.taus, opts);
    } catch (const Error& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    Sink sink(cfg.out, out);
    std::ostream& csv = sink.get();
    csv << kSweepHeader << '\n';
    bool any_failed = false;
    for (const auto& row : result.rows) {
        csv << format_double(row.tau) << ',' << row.n_steps << ',' << format_double(row.J_h) << ','
            << format_optional(row.e_J) << ',' << format_optional(row.e_sol_te) << ','
            << format_double(row.wall_ms) << '\n';
        any_failed = any_failed || row.failed;
    }
    csv << "# reference J = " << format_double(*result.J_ref)
        << (result.reference_is_computed ? " (classic run at tau_min/10)" : " (closed form)")
        << '\n';
    try {
        const OrderFit by_tau = fit_error_vs_tau(result);
        const OrderFit by_n = fit_error_vs_steps(result);
        csv << "# fitted slope err_J vs tau = " << format_double(by_tau.slope) << " ("
            << by_tau.used << " points, " << by_tau.dropped << " dropped)\n";
        csv << "# fitted slope err_J vs n_steps = " << format_double(by_n.slope) << '\n';
    } catch (const InsufficientData& e) {
        csv << "# fitted slope unavailable: " << e.what() << '\n';
    }
    for (const auto& row : result.rows) {
        if (row.failed) csv << "# tau " << format_double(row.tau) << " failed: " << row.failure << '\n';
    }
    if (any_failed) {
        err << "runtime error: at least one sweep row failed\n";
        return kExitRuntime;
    }
    return kExitOk;
}

int cmd_dwr(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    Setup s;
    DwrResult result;
    try {
        s = build_setup(cfg);
        if (!s.problem.linear) throw ConfigError("dwr needs a linear problem");
        if (!s.density().linear_weights) {
            throw ConfigError("dwr needs a linear density, '" + cfg.density + "' is not");
        }
        DwrConfig dcfg;
        dcfg.tau = cfg.taus.front();
        dcfg.refine_fraction = cfg.refine_fraction;
        dcfg.initial_cells = cfg.initial_cells;
        dcfg.max_iterations = cfg.max_iterations;
        result = dwr_loop(s.problem, *s.density().linear_weights, dcfg, s.J_ref);
    } catch (const Error& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    Sink sink(cfg.out, out);
    std::ostream& csv = sink.get();
    csv << kDwrHeader << '\n';
    for (const auto& row : result.trace) {
        csv << row.iteration << ',' << row.cells << ',' << format_double(row.eta) << ','
            << format_double(row.J_h) << ',' << format_optional(row.e_J) << '\n';
    }
    if (!result.converged) {
        csv << "# not converged after " << result.trace.size() << " iterations\n";
        err << "dwr loop did not reach eta <= tau\n";
        return kExitNonConvergence;
    }
    return kExitOk;
}

int cmd_check(std::ostream& out, double tamper_bstar) {
    SchemePair rk4 = builtin_rk4_pair();
    if (tamper_bstar != 0.0) rk4.dense.front().b_star(0) += tamper_bstar;
    const bool ok = print_check_table(run_check_battery(rk4), out);
    return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace goalstep::cli
