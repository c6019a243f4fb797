#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "goalstep/analysis.hpp"
#include "goalstep/control.hpp"
#include "goalstep/driver.hpp"
#include "goalstep/dwr.hpp"
#include "goalstep/errors.hpp"
#include "goalstep/problems.hpp"
#include "goalstep/schemes.hpp"
#include "goalstep/verification.hpp"

namespace py = pybind11;
using namespace goalstep;

namespace {

ProblemSpec problem_spec(const std::string& id, double k) {
    ProblemSpec spec;
    spec.id = id;
    spec.k = k;
    return spec;
}

QuadratureRule default_rule(const SchemePair& pair, const std::optional<std::string>& quad) {
    if (quad) return quadrature_by_id(*quad);
    return pair.kind == SchemeKind::ExplicitRk ? QuadratureRule::simpson()
                                               : QuadratureRule::trapezoid();
}

ControllerConfig controller(const SchemePair& pair, double tau, const std::string& variant,
                            bool limiter) {
    ControllerConfig cfg;
    cfg.tau = tau;
    cfg.p_hat = pair.companion_order();
    cfg.variant = variant_by_id(variant);
    cfg.limiter_enabled = limiter;
    cfg.validate();
    return cfg;
}

py::dict row_dict(const SweepRow& r) {
    py::dict d;
    d["tau"] = r.tau;
    d["n_steps"] = r.n_steps;
    d["J_h"] = r.J_h;
    d["e_J"] = r.e_J;
    d["e_sol_te"] = r.e_sol_te;
    d["wall_ms"] = r.wall_ms;
    d["failed"] = r.failed;
    return d;
}

}  // namespace

PYBIND11_MODULE(_goalstep, m) {
    m.doc() = "Adaptive time integration with goal-oriented step size control";

    // later registrations are tried first, so the subclass goes last
    py::register_exception<Error>(m, "GoalstepError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<ControllerConfig>(m, "ControllerConfig")
        .def(py::init<>())
        .def_readwrite("tau", &ControllerConfig::tau)
        .def_readwrite("p_hat", &ControllerConfig::p_hat)
        .def_readwrite("f_min", &ControllerConfig::f_min)
        .def_readwrite("f_max", &ControllerConfig::f_max)
        .def_readwrite("limiter_enabled", &ControllerConfig::limiter_enabled);

    py::class_<RunReport>(m, "RunReport")
        .def_readonly("J_h", &RunReport::J_h)
        .def_readonly("n_steps", &RunReport::n_steps)
        .def_readonly("e_J", &RunReport::e_J)
        .def_readonly("e_sol_te", &RunReport::e_sol_te)
        .def_readonly("t_final", &RunReport::t_final)
        .def_readonly("u_final", &RunReport::u_final)
        .def_readonly("failure", &RunReport::failure)
        .def_property_readonly("ok", &RunReport::ok)
        .def_property_readonly("times",
                               [](const RunReport& r) {
                                   std::vector<double> t;
                                   for (const auto& s : r.steps) t.push_back(s.t);
                                   return t;
                               })
        .def_property_readonly("steps", [](const RunReport& r) {
            std::vector<double> dt;
            for (const auto& s : r.steps) dt.push_back(s.dt);
            return dt;
        });

    m.def(
        "adaptive_solve",
        [](const std::string& problem, double tau, const std::string& density,
           const std::string& scheme, const std::string& variant, bool limiter, double k,
           std::optional<std::string> quadrature) {
            const auto spec = problem_spec(problem, k);
            const auto p = make_problem(spec);
            const auto pair = scheme_by_id(scheme);
            const auto rule = default_rule(pair, quadrature);
            DriverOptions opt;
            opt.J_ref = reference_qoi(spec, density);
            py::gil_scoped_release nogil;
            return adaptive_solve(p, pair, p.density(density), rule,
                                  controller(pair, tau, variant, limiter), opt);
        },
        py::arg("problem") = "toy", py::arg("tau") = 1e-6, py::arg("density") = "u2",
        py::arg("scheme") = "theta", py::arg("variant") = "goal", py::arg("limiter") = true,
        py::arg("k") = -1.0, py::arg("quadrature") = py::none());

    m.def(
        "sweep",
        [](const std::string& problem, std::vector<double> taus, const std::string& density,
           const std::string& scheme, const std::string& variant, double k, unsigned jobs) {
            const auto spec = problem_spec(problem, k);
            const auto p = make_problem(spec);
            const auto pair = scheme_by_id(scheme);
            const auto rule = default_rule(pair, std::nullopt);
            SweepOptions opt;
            opt.J_ref = reference_qoi(spec, density);
            opt.jobs = jobs;
            SweepResult res;
            {
                py::gil_scoped_release nogil;
                res = sweep(p, pair, p.density(density), rule,
                            controller(pair, taus.front(), variant, true), taus, opt);
            }
            py::list rows;
            for (const auto& r : res.rows) rows.append(row_dict(r));
            py::dict out;
            out["rows"] = rows;
            out["J_ref"] = res.J_ref;
            try {
                out["slope_tau"] = fit_error_vs_tau(res).slope;
                out["slope_steps"] = fit_error_vs_steps(res).slope;
            } catch (const InsufficientData&) {
                out["slope_tau"] = py::none();
                out["slope_steps"] = py::none();
            }
            return out;
        },
        py::arg("problem"), py::arg("taus"), py::arg("density") = "u2",
        py::arg("scheme") = "theta", py::arg("variant") = "goal", py::arg("k") = -1.0,
        py::arg("jobs") = 1);

    m.def(
        "dwr_loop",
        [](double tau, const Eigen::VectorXd& w, double k, std::size_t max_iterations) {
            const auto p = toy_problem(k);
            DwrConfig cfg;
            cfg.tau = tau;
            cfg.max_iterations = max_iterations;
            const auto res = dwr_loop(p, w, cfg);
            py::dict out;
            out["converged"] = res.converged;
            out["eta"] = res.eta;
            out["J_h"] = res.J_h;
            out["nodes"] = res.grid.nodes;
            std::vector<std::size_t> cells;
            for (const auto& g : res.grids) cells.push_back(g.cells());
            out["cells"] = cells;
            return out;
        },
        py::arg("tau"), py::arg("w"), py::arg("k") = -1.0, py::arg("max_iterations") = 40);

    m.def("toy_exact_qoi", &toy_exact_qoi, py::arg("k"), py::arg("density"),
          py::arg("te") = 2.0);
    m.def(
        "seminorm",
        [](const Eigen::VectorXd& x, const Eigen::VectorXd& w) {
            return seminorm(x, WeightVector(w));
        },
        py::arg("x"), py::arg("w"));
    m.def(
        "lipschitz_seminorm",
        [](const Eigen::MatrixXd& a, const Eigen::VectorXd& w) {
            return lipschitz_seminorm(a, WeightVector(w));
        },
        py::arg("a"), py::arg("w"));
    m.def(
        "deadbeat_next_step",
        [](double dt, double est, const ControllerConfig& cfg) {
            EstimateRecord e;
            e.value = est;
            e.zero_flag = est == 0.0;
            return deadbeat_next_step(dt, e, cfg);
        },
        py::arg("dt"), py::arg("est"), py::arg("cfg"));
    m.def("initial_step", [](double tau, int p_hat) { return initial_step(tau, p_hat); },
          py::arg("tau"), py::arg("p_hat"));
    m.def(
        "fit_observed_order",
        [](const std::vector<double>& xs, const std::vector<double>& ys) {
            return fit_observed_order(xs, ys).slope;
        },
        py::arg("xs"), py::arg("ys"));
    m.def(
        "order_conditions",
        [](const Eigen::VectorXd& weights, double gamma, int up_to_order) {
            const auto rep =
                verify_order_conditions(weights, classical_rk4_tableau(), gamma, up_to_order);
            py::list out;
            for (const auto& c : rep.conditions) out.append(py::make_tuple(c.label, c.residual, c.passed));
            return out;
        },
        py::arg("weights"), py::arg("gamma") = 1.0, py::arg("up_to_order") = 4,
        "Order-condition residuals of stage weights on the classical RK4 stages.");
    m.def("check", []() {
        const auto rows = run_check_battery();
        bool ok = true;
        for (const auto& r : rows) ok = ok && r.passed;
        return ok;
    });
}
