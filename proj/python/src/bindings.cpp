#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "fracnl/abm.hpp"
#include "fracnl/caputo.hpp"
#include "fracnl/errors.hpp"
#include "fracnl/experiment.hpp"
#include "fracnl/gamma.hpp"
#include "fracnl/mittag_leffler.hpp"
#include "fracnl/newton_leipnik.hpp"
#include "fracnl/pde.hpp"
#include "fracnl/stability.hpp"
#include "fracnl/sync.hpp"

namespace py = pybind11;
using namespace fracnl;

namespace {

SystemParams params(double a, double alpha, std::array<double, 3> d) {
    SystemParams p{a, alpha, d};
    p.validate();
    return p;
}

py::array_t<double> to_array(const State3& s) { return py::array_t<double>(3, s.data()); }

// Snapshots as (times, array[n_snapshots, 3, n_nodes]).
template <class Get>
py::tuple stack_fields(std::size_t count, std::size_t n_nodes, Get get) {
    py::array_t<double> t(static_cast<py::ssize_t>(count));
    py::array_t<double> u({static_cast<py::ssize_t>(count), py::ssize_t{3}, static_cast<py::ssize_t>(n_nodes)});
    auto tv = t.mutable_unchecked<1>();
    auto uv = u.mutable_unchecked<3>();
    for (std::size_t k = 0; k < count; ++k) {
        const auto& [time, field] = get(k);
        tv(static_cast<py::ssize_t>(k)) = time;
        for (std::size_t c = 0; c < 3; ++c)
            for (std::size_t j = 0; j < n_nodes; ++j)
                uv(static_cast<py::ssize_t>(k), static_cast<py::ssize_t>(c), static_cast<py::ssize_t>(j)) = field(c, j);
    }
    return py::make_tuple(t, u);
}

py::array_t<double> grid_nodes(const Grid1D& g) {
    py::array_t<double> x(static_cast<py::ssize_t>(g.n_nodes()));
    auto xv = x.mutable_unchecked<1>();
    for (std::size_t j = 0; j < g.n_nodes(); ++j) xv(static_cast<py::ssize_t>(j)) = g.x(j);
    return x;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fractional Newton-Leipnik toolkit: Caputo numerics, stability tests, reaction-diffusion and synchronization runs.";
    m.attr("__version__") = std::string(toolkit_version());

    py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    m.def("gamma", &gamma_fn, py::arg("x"));
    m.def("mittag_leffler", &mittag_leffler, py::arg("alpha"), py::arg("z"),
          "One-parameter Mittag-Leffler function E_alpha(z), alpha in (0, 1], |z| <= 50.");
    m.def(
        "l1_weights", [](double delta, std::size_t n) { return l1_weights(FractionalOrder(delta), n); },
        py::arg("delta"), py::arg("n"));
    m.def(
        "caputo_eval",
        [](std::vector<double> samples, double dt, double delta) {
            return caputo_eval(HistoryBuffer(0.0, dt, std::move(samples)), FractionalOrder(delta));
        },
        py::arg("samples"), py::arg("dt"), py::arg("delta"),
        "L1 estimate of the Caputo derivative at the last of uniformly spaced samples.");

    m.def(
        "vector_field",
        [](const State3& u, double a, double alpha) { return to_array(vector_field(params(a, alpha, {0, 0, 0}), u)); },
        py::arg("u"), py::arg("a") = 0.4, py::arg("alpha") = 0.175);
    m.def(
        "jacobian", [](const State3& u, double a, double alpha) { return jacobian(params(a, alpha, {0, 0, 0}), u); },
        py::arg("u"), py::arg("a") = 0.4, py::arg("alpha") = 0.175);
    m.def(
        "divergence", [](double a, double alpha) { return divergence(params(a, alpha, {0, 0, 0})); },
        py::arg("a") = 0.4, py::arg("alpha") = 0.175);
    m.def(
        "equilibria",
        [](double a, double alpha) {
            const auto set = equilibria(params(a, alpha, {0, 0, 0}));
            py::array_t<double> pts({static_cast<py::ssize_t>(set.points.size()), py::ssize_t{3}});
            std::vector<double> residuals;
            auto v = pts.mutable_unchecked<2>();
            for (std::size_t i = 0; i < set.points.size(); ++i) {
                for (int c = 0; c < 3; ++c) v(static_cast<py::ssize_t>(i), c) = set.points[i].point[c];
                residuals.push_back(set.points[i].residual);
            }
            return py::make_tuple(pts, residuals, set.partial);
        },
        py::arg("a") = 0.4, py::arg("alpha") = 0.175, "Returns (points[n, 3], residuals, partial).");

    m.def(
        "matignon_margin",
        [](const Matrix3& j) {
            const auto r = matignon_margin(j);
            py::dict out;
            out["eigenvalues"] = r.eigenvalues;
            out["worst_arg"] = r.worst_arg;
            out["margin"] = r.margin;
            return out;
        },
        py::arg("jacobian"));
    m.def(
        "deng_stable",
        [](const Matrix3& j, std::array<double, 3> orders, std::int64_t max_den) {
            const std::array<Rational, 3> q{rationalize(orders[0], max_den), rationalize(orders[1], max_den),
                                            rationalize(orders[2], max_den)};
            const auto r = deng_stable(j, q);
            py::dict out;
            out["stable"] = r.stable;
            out["lcm"] = r.lcm;
            out["degree"] = r.degree;
            out["threshold"] = r.threshold;
            out["roots"] = r.roots;
            out["orders"] = std::vector<std::pair<std::int64_t, std::int64_t>>{
                {q[0].num, q[0].den}, {q[1].num, q[1].den}, {q[2].num, q[2].den}};
            return out;
        },
        py::arg("jacobian"), py::arg("orders"), py::arg("max_denominator") = 100,
        "Incommensurate-order root test; orders are rationalized with the given denominator cap.");
    m.def("neumann_spectrum", &neumann_spectrum, py::arg("length"), py::arg("n_max"));
    m.def(
        "sync_condition_check",
        [](double delta, std::array<double, 3> d, double length, std::size_t n_max, double a, double alpha) {
            const auto r = sync_condition_check(params(a, alpha, d), FractionalOrder(delta), length, n_max);
            std::vector<double> args;
            for (const auto& mode : r.modes) args.push_back(mode.arg);
            py::dict out;
            out["satisfied"] = r.satisfied;
            out["worst_mode"] = r.worst_mode;
            out["truncated"] = r.truncated;
            out["mode_args"] = args;
            out["note"] = r.note;
            return out;
        },
        py::arg("delta"), py::arg("d") = std::array<double, 3>{0.1, 0.1, 0.1}, py::arg("length") = 20.0,
        py::arg("n_max") = 200, py::arg("a") = 0.4, py::arg("alpha") = 0.175);

    m.def(
        "control_law",
        [](const State3& u, const State3& e, bool as_printed, double a, double alpha) {
            return to_array(control_law(params(a, alpha, {0, 0, 0}), u, e,
                                        as_printed ? ControllerVariant::AsPrinted : ControllerVariant::Consistent));
        },
        py::arg("u"), py::arg("e"), py::arg("as_printed") = false, py::arg("a") = 0.4, py::arg("alpha") = 0.175);

    m.def(
        "simulate_ode",
        [](const std::string& config) {
            const auto spec = parse_spec(config, ExperimentKind::Ode);
            const SystemParams p = spec.params;
            const VectorField f = [p](double, std::span<const double> x, std::span<double> out) {
                const State3 v = vector_field(p, {x[0], x[1], x[2]});
                for (int i = 0; i < 3; ++i) out[i] = v[i];
            };
            const std::vector<double> x0{spec.initial_state[0], spec.initial_state[1], spec.initial_state[2]};
            const std::vector<FractionalOrder> orders{FractionalOrder(spec.orders[0]), FractionalOrder(spec.orders[1]),
                                                      FractionalOrder(spec.orders[2])};
            const auto grid = TimeGrid::until(spec.t0, spec.t_end, spec.dt);
            const Trajectory traj = [&] {
                py::gil_scoped_release release;
                return abm_solve(f, x0, orders, grid);
            }();
            py::array_t<double> t(static_cast<py::ssize_t>(traj.size()));
            py::array_t<double> x({static_cast<py::ssize_t>(traj.size()), py::ssize_t{3}});
            auto tv = t.mutable_unchecked<1>();
            auto xv = x.mutable_unchecked<2>();
            for (std::size_t k = 0; k < traj.size(); ++k) {
                tv(static_cast<py::ssize_t>(k)) = grid.time(k);
                for (int c = 0; c < 3; ++c) xv(static_cast<py::ssize_t>(k), c) = traj.at(k, static_cast<std::size_t>(c));
            }
            return py::make_tuple(t, x);
        },
        py::arg("config") = "{}", "ABM integration of the fractional ODE from a JSON config. Returns (t, x[n, 3]).");

    m.def(
        "simulate_pde",
        [](const std::string& config, unsigned threads) {
            const auto spec = parse_spec(config, ExperimentKind::Pde);
            const auto cfg = spec.rd_config(threads);
            RdResult res;
            {
                py::gil_scoped_release release;
                res = simulate_rd(cfg, newton_leipnik_reaction(spec.params), spec.master_ic());
            }
            const py::tuple tu = stack_fields(res.snapshots.size(), cfg.grid.n_nodes(), [&](std::size_t k) {
                return std::pair<double, const Field&>(res.snapshots[k].t, res.snapshots[k].field);
            });
            return py::make_tuple(tu[0], grid_nodes(cfg.grid), tu[1]);
        },
        py::arg("config") = "{}", py::arg("threads") = 1,
        "Reaction-diffusion run from a JSON config. Returns (t, x, u[n_snapshots, 3, n_nodes]).");

    m.def(
        "run_sync",
        [](const std::string& config, unsigned threads) {
            const auto spec = parse_spec(config, ExperimentKind::Sync);
            SyncConfig cfg;
            cfg.rd = spec.rd_config(threads);
            cfg.controller_enabled = spec.controller;
            cfg.variant = spec.controller_variant;
            cfg.master_ic = spec.master_ic();
            cfg.slave_ic = spec.slave_ic_field();
            cfg.error_norm_stride = spec.error_norm_stride;
            SyncResult res;
            {
                py::gil_scoped_release release;
                res = run_sync(cfg);
            }
            std::vector<double> t, l2, sup, v;
            for (const auto& n : res.norms) {
                t.push_back(n.t);
                l2.push_back(n.l2);
                sup.push_back(n.sup);
                v.push_back(n.lyapunov);
            }
            py::dict norms;
            norms["t"] = py::array_t<double>(static_cast<py::ssize_t>(t.size()), t.data());
            norms["l2"] = py::array_t<double>(static_cast<py::ssize_t>(l2.size()), l2.data());
            norms["sup"] = py::array_t<double>(static_cast<py::ssize_t>(sup.size()), sup.data());
            norms["V"] = py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
            const std::size_t n = cfg.rd.grid.n_nodes();
            auto pick = [&](auto member) {
                return stack_fields(res.snapshots.size(), n, [&](std::size_t k) {
                    return std::pair<double, const Field&>(res.snapshots[k].t, res.snapshots[k].*member);
                });
            };
            py::dict out;
            out["norms"] = norms;
            out["t"] = pick(&SyncSnapshot::master)[0];
            out["x"] = grid_nodes(cfg.rd.grid);
            out["master"] = pick(&SyncSnapshot::master)[1];
            out["slave"] = pick(&SyncSnapshot::slave)[1];
            out["error"] = pick(&SyncSnapshot::error)[1];
            out["beyond_theorem"] = res.beyond_theorem;
            return out;
        },
        py::arg("config") = "{}", py::arg("threads") = 1, "Master-slave synchronization run from a JSON config.");

    m.def(
        "normalize_config",
        [](const std::string& config) { return serialize_spec(parse_spec(config)); }, py::arg("config"),
        "Parses a config (kind required) and returns it with every default filled in.");
    m.def(
        "run_experiment",
        [](const std::string& config, const std::filesystem::path& out_dir, unsigned threads) {
            const auto spec = parse_spec(config);
            RunOutcome r;
            {
                py::gil_scoped_release release;
                r = run(spec, out_dir, RunOptions{threads});
            }
            py::dict out;
            out["exit_code"] = r.exit_code;
            out["message"] = r.message;
            out["files"] = r.files;
            out["manifest"] = r.manifest;
            return out;
        },
        py::arg("config"), py::arg("out_dir"), py::arg("threads") = 1,
        "Runs an experiment the way the CLI does, writing CSV files and manifest.json.");
}
