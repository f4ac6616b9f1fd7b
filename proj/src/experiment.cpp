#include "fracnl/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include <json.hpp>

#include "fracnl/abm.hpp"
#include "fracnl/csv.hpp"
#include "fracnl/errors.hpp"
#include "fracnl/stability.hpp"

#ifndef FRACNL_VERSION
#define FRACNL_VERSION "0.0.0"
#endif

namespace fracnl {

using nlohmann::json;

std::string_view toolkit_version() { return FRACNL_VERSION; }

std::string_view to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Ode: return "ode";
        case ExperimentKind::Pde: return "pde";
        case ExperimentKind::Sync: return "sync";
        case ExperimentKind::Stability: return "stability";
        case ExperimentKind::Equilibria: return "equilibria";
    }
    return "unknown";
}

ExperimentKind kind_from_string(std::string_view name) {
    for (auto k : {ExperimentKind::Ode, ExperimentKind::Pde, ExperimentKind::Sync, ExperimentKind::Stability,
                   ExperimentKind::Equilibria}) {
        if (to_string(k) == name) return k;
    }
    throw ParseError("kind", "unknown experiment kind '" + std::string(name) + "'");
}

RDConfig ExperimentSpec::rd_config(unsigned threads) const {
    RDConfig cfg;
    cfg.params = params;
    cfg.orders = {FractionalOrder(orders[0]), FractionalOrder(orders[1]), FractionalOrder(orders[2])};
    cfg.grid = Grid1D(length, n_nodes);
    cfg.time = TimeGrid::until(t0, t_end, dt);
    cfg.memory_window = memory_window;
    cfg.snapshot_stride = snapshot_stride;
    cfg.threads = threads;
    return cfg;
}

Field ExperimentSpec::master_ic() const { return paper_initial_conditions(Grid1D(length, n_nodes)); }

Field ExperimentSpec::slave_ic_field() const {
    Field f = master_ic();
    for (double& v : f.data()) {
        switch (slave_ic.kind) {
            case SlaveIcRule::Kind::Scale: v *= slave_ic.value; break;
            case SlaveIcRule::Kind::Offset: v += slave_ic.value; break;
            case SlaveIcRule::Kind::Identical: break;
        }
    }
    return f;
}

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "kind",   "a",       "alpha",           "d",          "delta",       "initial_state", "t0",
        "t_end",  "dt",      "length",          "n_nodes",    "snapshot_stride", "memory_window", "x_probe",
        "controller", "controller_variant", "slave_ic", "error_norm_stride", "n_modes", "max_denominator", "out"};
    return keys;
}

double get_number(const json& doc, const std::string& key) {
    const auto& v = doc.at(key);
    if (!v.is_number()) throw ParseError(key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ParseError(key, "must be finite");
    return x;
}

std::size_t get_count(const json& doc, const std::string& key, std::size_t min_value) {
    const auto& v = doc.at(key);
    if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min_value)) {
        throw ParseError(key, "expected an integer >= " + std::to_string(min_value));
    }
    return v.get<std::size_t>();
}

std::array<double, 3> get_triple(const json& doc, const std::string& key) {
    const auto& v = doc.at(key);
    if (v.is_number()) {
        const double x = get_number(doc, key);
        return {x, x, x};
    }
    if (!v.is_array() || v.size() != 3) throw ParseError(key, "expected a number or an array of three numbers");
    std::array<double, 3> out{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (!v[i].is_number()) throw ParseError(key, "array entries must be numbers");
        out[i] = v[i].get<double>();
        if (!std::isfinite(out[i])) throw ParseError(key, "entries must be finite");
    }
    return out;
}

ControllerVariant variant_from_string(const std::string& s) {
    if (s == "consistent") return ControllerVariant::Consistent;
    if (s == "as_printed") return ControllerVariant::AsPrinted;
    throw ParseError("controller_variant", "expected 'consistent' or 'as_printed'");
}

std::string variant_name(ControllerVariant v) {
    return v == ControllerVariant::Consistent ? "consistent" : "as_printed";
}

SlaveIcRule parse_slave_rule(const json& v) {
    if (!v.is_object()) throw ParseError("slave_ic", "expected an object {rule, value}");
    SlaveIcRule r;
    for (const auto& [k, _] : v.items()) {
        if (k != "rule" && k != "value") throw ParseError("slave_ic." + k, "unknown key");
    }
    if (!v.contains("rule") || !v["rule"].is_string()) throw ParseError("slave_ic.rule", "expected a string");
    const auto name = v["rule"].get<std::string>();
    if (name == "scale") {
        r.kind = SlaveIcRule::Kind::Scale;
        r.value = 1.5;
    } else if (name == "offset") {
        r.kind = SlaveIcRule::Kind::Offset;
        r.value = 1e-3;
    } else if (name == "identical") {
        r.kind = SlaveIcRule::Kind::Identical;
        r.value = 0.0;
    } else {
        throw ParseError("slave_ic.rule", "expected 'scale', 'offset' or 'identical'");
    }
    if (v.contains("value")) {
        if (!v["value"].is_number()) throw ParseError("slave_ic.value", "expected a number");
        r.value = v["value"].get<double>();
    }
    if (r.kind == SlaveIcRule::Kind::Identical) r.value = 0.0;
    return r;
}

json slave_rule_json(const SlaveIcRule& r) {
    switch (r.kind) {
        case SlaveIcRule::Kind::Scale: return {{"rule", "scale"}, {"value", r.value}};
        case SlaveIcRule::Kind::Offset: return {{"rule", "offset"}, {"value", r.value}};
        case SlaveIcRule::Kind::Identical: return {{"rule", "identical"}, {"value", 0.0}};
    }
    return {};
}

std::string describe_slave_rule(const SlaveIcRule& r) {
    switch (r.kind) {
        case SlaveIcRule::Kind::Scale: return "slave = " + format_double(r.value) + " * master (componentwise)";
        case SlaveIcRule::Kind::Offset: return "slave = master + " + format_double(r.value) + " (every component)";
        case SlaveIcRule::Kind::Identical: return "slave = master";
    }
    return {};
}

ExperimentSpec spec_from_json(json doc, std::optional<ExperimentKind> expected) {
    if (!doc.is_object()) throw ParseError("", "config must be a JSON object");
    if (expected) {
        if (!doc.contains("kind")) {
            doc["kind"] = to_string(*expected);
        } else if (!doc["kind"].is_string() || doc["kind"].get<std::string>() != to_string(*expected)) {
            throw ParseError("kind", "config kind does not match the requested command '" +
                                         std::string(to_string(*expected)) + "'");
        }
    }
    for (const auto& [key, _] : doc.items()) {
        if (!known_keys().contains(key)) throw ParseError(key, "unknown key");
    }
    ExperimentSpec s;
    if (!doc.contains("kind") || !doc["kind"].is_string()) throw ParseError("kind", "required string");
    s.kind = kind_from_string(doc["kind"].get<std::string>());

    if (doc.contains("a")) s.params.a = get_number(doc, "a");
    if (doc.contains("alpha")) s.params.alpha = get_number(doc, "alpha");
    if (doc.contains("d")) {
        s.params.d = get_triple(doc, "d");
        for (double di : s.params.d) {
            if (di < 0.0) throw ParseError("d", "diffusivities must be non-negative");
        }
    }
    if (doc.contains("delta")) {
        s.orders = get_triple(doc, "delta");
        for (double o : s.orders) {
            if (!(o > 0.0 && o <= 1.0)) throw ParseError("delta", "fractional orders must lie in (0, 1]");
        }
    }
    if (doc.contains("initial_state")) {
        const auto v = get_triple(doc, "initial_state");
        s.initial_state = State3(v[0], v[1], v[2]);
    }
    if (doc.contains("t0")) s.t0 = get_number(doc, "t0");
    if (doc.contains("t_end")) s.t_end = get_number(doc, "t_end");
    if (doc.contains("dt")) s.dt = get_number(doc, "dt");
    if (!(s.dt > 0.0)) throw ParseError("dt", "must be positive");
    if (!(s.t_end - s.t0 >= s.dt)) throw ParseError("t_end", "horizon must cover at least one step");
    if (doc.contains("length")) s.length = get_number(doc, "length");
    if (!(s.length > 0.0)) throw ParseError("length", "must be positive");
    if (doc.contains("n_nodes")) s.n_nodes = get_count(doc, "n_nodes", 3);
    if (doc.contains("snapshot_stride")) s.snapshot_stride = get_count(doc, "snapshot_stride", 1);
    if (doc.contains("memory_window") && !doc["memory_window"].is_null()) {
        s.memory_window = get_count(doc, "memory_window", 1);
    }
    if (doc.contains("x_probe")) s.x_probe = get_number(doc, "x_probe");
    if (!(s.x_probe >= 0.0 && s.x_probe <= s.length)) throw ParseError("x_probe", "must lie within [0, length]");
    if (doc.contains("controller")) {
        if (!doc["controller"].is_boolean()) throw ParseError("controller", "expected a boolean");
        s.controller = doc["controller"].get<bool>();
    }
    if (doc.contains("controller_variant")) {
        if (!doc["controller_variant"].is_string()) throw ParseError("controller_variant", "expected a string");
        s.controller_variant = variant_from_string(doc["controller_variant"].get<std::string>());
    }
    if (doc.contains("slave_ic")) s.slave_ic = parse_slave_rule(doc["slave_ic"]);
    if (doc.contains("error_norm_stride")) s.error_norm_stride = get_count(doc, "error_norm_stride", 1);
    if (doc.contains("n_modes")) s.n_modes = get_count(doc, "n_modes", 1);
    if (doc.contains("max_denominator")) {
        s.max_denominator = static_cast<std::int64_t>(get_count(doc, "max_denominator", 1));
    }
    if (doc.contains("out") && !doc["out"].is_null()) {
        if (!doc["out"].is_string()) throw ParseError("out", "expected a string path");
        s.out = doc["out"].get<std::string>();
    }
    return s;
}

json spec_to_json(const ExperimentSpec& s) {
    json j;
    j["kind"] = to_string(s.kind);
    j["a"] = s.params.a;
    j["alpha"] = s.params.alpha;
    j["d"] = s.params.d;
    j["delta"] = s.orders;
    j["initial_state"] = {s.initial_state[0], s.initial_state[1], s.initial_state[2]};
    j["t0"] = s.t0;
    j["t_end"] = s.t_end;
    j["dt"] = s.dt;
    j["length"] = s.length;
    j["n_nodes"] = s.n_nodes;
    j["snapshot_stride"] = s.snapshot_stride;
    j["memory_window"] = s.memory_window ? json(*s.memory_window) : json(nullptr);
    j["x_probe"] = s.x_probe;
    j["controller"] = s.controller;
    j["controller_variant"] = variant_name(s.controller_variant);
    j["slave_ic"] = slave_rule_json(s.slave_ic);
    j["error_norm_stride"] = s.error_norm_stride;
    j["n_modes"] = s.n_modes;
    j["max_denominator"] = s.max_denominator;
    j["out"] = s.out ? json(*s.out) : json(nullptr);
    return j;
}

}  // namespace

ExperimentSpec parse_spec(std::string_view text, std::optional<ExperimentKind> expected) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("", std::string("malformed config: ") + e.what());
    }
    if (doc.is_object() && doc.contains("spec") && doc.contains("toolkit_version")) {
        return spec_from_json(doc["spec"], expected);
    }
    return spec_from_json(std::move(doc), expected);
}

std::string serialize_spec(const ExperimentSpec& spec) { return spec_to_json(spec).dump(2); }

namespace {

struct RunContext {
    const ExperimentSpec& spec;
    std::filesystem::path dir;
    unsigned threads;
    json derived = json::object();
    json notes = json::array();
    std::vector<std::filesystem::path> files;

    CsvWriter csv(const std::string& name, const std::vector<std::string>& header) {
        files.push_back(dir / name);
        return CsvWriter(dir / name, header);
    }
};

void run_equilibria(RunContext& ctx) {
    const auto eq = equilibria(ctx.spec.params);
    auto out = ctx.csv("equilibria.csv", {"index", "u1", "u2", "u3", "residual"});
    for (std::size_t i = 0; i < eq.points.size(); ++i) {
        const auto& p = eq.points[i].point;
        out.row({static_cast<double>(i + 1), p[0], p[1], p[2], eq.points[i].residual});
    }
    ctx.derived["equilibrium_count"] = eq.points.size();
    ctx.derived["partial"] = eq.partial;
    if (eq.partial) ctx.notes.push_back("Newton failed from some seeds and fewer than five roots were found");
}

void run_stability(RunContext& ctx) {
    const auto& s = ctx.spec;
    const auto eq = equilibria(s.params);
    std::array<Rational, 3> rational{Rational(1, 1), Rational(1, 1), Rational(1, 1)};
    json rj = json::array();
    for (std::size_t i = 0; i < 3; ++i) {
        rational[i] = rationalize(s.orders[i], s.max_denominator);
        rj.push_back(std::to_string(rational[i].num) + "/" + std::to_string(rational[i].den));
    }
    ctx.derived["rationalized_orders"] = rj;
    ctx.derived["rationalization_max_denominator"] = s.max_denominator;

    auto out = ctx.csv("stability.csv", {"label", "u1", "u2", "u3", "eig1_re", "eig1_im", "eig2_re", "eig2_im",
                                         "eig3_re", "eig3_im", "worst_arg", "margin", "commensurate_stable",
                                         "deng_stable", "deng_lcm", "deng_min_arg"});
    auto emit = [&](const std::string& label, const State3& at, const Matrix3& jac) {
        const auto rep = matignon_margin(jac);
        std::vector<double> row{at[0], at[1], at[2]};
        for (const auto& l : rep.eigenvalues) {
            row.push_back(l.real());
            row.push_back(l.imag());
        }
        row.push_back(rep.worst_arg);
        row.push_back(rep.margin);
        row.push_back(s.commensurate() ? (rep.stable_for(s.orders[0]) ? 1.0 : 0.0) : std::nan(""));
        try {
            const auto deng = deng_stable(jac, rational);
            row.push_back(deng.stable ? 1.0 : 0.0);
            row.push_back(static_cast<double>(deng.lcm));
            row.push_back(deng.roots.empty() ? std::nan("") : std::abs(principal_arg(deng.roots.front())));
        } catch (const DomainError& e) {
            ctx.notes.push_back(label + ": " + e.what());
            row.insert(row.end(), {std::nan(""), std::nan(""), std::nan("")});
        }
        out.labeled_row(label, row);
    };
    for (std::size_t i = 0; i < eq.points.size(); ++i) {
        emit("O" + std::to_string(i + 1), eq.points[i].point, jacobian(s.params, eq.points[i].point));
    }
    Matrix3 je;
    je << -s.params.a, 1.0, 0.0, -1.0, -kDamping2, 0.0, 0.0, 0.0, -kDamping2;
    emit("error_system", State3::Zero(), je);

    const auto rep = sync_condition_check(s.params, FractionalOrder(*std::max_element(s.orders.begin(), s.orders.end())),
                                          s.length, s.n_modes);
    auto modes = ctx.csv("sync_modes.csv", {"index", "lambda", "xi1_re", "xi1_im", "xi2_re", "xi2_im", "xi3", "arg",
                                            "constrained", "satisfied"});
    for (const auto& m : rep.modes) {
        modes.row({static_cast<double>(m.index), m.eigen.lambda_i, m.eigen.xi[0].real(), m.eigen.xi[0].imag(),
                   m.eigen.xi[1].real(), m.eigen.xi[1].imag(), m.eigen.xi[2].real(), m.arg,
                   m.constrained ? 1.0 : 0.0, m.satisfied ? 1.0 : 0.0});
    }
    ctx.derived["sync_condition_satisfied"] = rep.satisfied;
    ctx.derived["sync_condition_truncated"] = rep.truncated;
    if (!rep.note.empty()) ctx.notes.push_back(rep.note);
    if (!s.commensurate()) ctx.notes.push_back("mode condition checked at the largest order (beyond-theorem)");
}

void run_ode(RunContext& ctx) {
    const auto& s = ctx.spec;
    const auto grid = TimeGrid::until(s.t0, s.t_end, s.dt);
    const std::array<FractionalOrder, 3> orders{FractionalOrder(s.orders[0]), FractionalOrder(s.orders[1]),
                                                FractionalOrder(s.orders[2])};
    const SystemParams p = s.params;
    const VectorField f = [p](double, std::span<const double> x, std::span<double> out) {
        const State3 v = vector_field(p, State3(x[0], x[1], x[2]));
        for (int i = 0; i < 3; ++i) out[static_cast<std::size_t>(i)] = v[i];
    };
    const std::array<double, 3> x0{s.initial_state[0], s.initial_state[1], s.initial_state[2]};
    AbmOptions opts;
    opts.memory_window = s.memory_window;
    const auto traj = abm_solve(f, x0, orders, grid, opts);
    auto out = ctx.csv("ode.csv", {"t", "u1", "u2", "u3"});
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (k % s.snapshot_stride != 0 && k + 1 != traj.size()) continue;
        out.row({grid.time(k), traj.at(k, 0), traj.at(k, 1), traj.at(k, 2)});
    }
    ctx.derived["n_steps"] = grid.n_steps;
    ctx.derived["integrator"] = "fractional Adams-Bashforth-Moulton predictor-corrector";
}

void write_field_rows(CsvWriter& out, const Snapshot& snap) {
    const auto& g = snap.field.grid();
    for (std::size_t j = 0; j < g.n_nodes(); ++j) {
        const auto u = snap.field.at(j);
        out.row({snap.t, g.x(j), u[0], u[1], u[2]});
    }
}

void describe_rd(RunContext& ctx, const RDConfig& cfg) {
    ctx.derived["dt"] = cfg.time.dt;
    ctx.derived["n_steps"] = cfg.time.n_steps;
    ctx.derived["dx"] = cfg.grid.dx();
    ctx.derived["d"] = ctx.spec.params.d;
    ctx.derived["memory"] = cfg.memory_window ? "window of " + std::to_string(*cfg.memory_window) + " steps" : "full";
    ctx.derived["initial_condition"] = "u1 = 0.349 (1 + 0.3 cos(x/2)), u2 = 0, u3 = -0.3 (1 + 0.3 cos(x/2))";
    ctx.derived["integrator"] = "L1 scheme, implicit diffusion, lagged explicit reaction";
}

void run_pde(RunContext& ctx) {
    const auto cfg = ctx.spec.rd_config(ctx.threads);
    describe_rd(ctx, cfg);
    const auto res = simulate_rd(cfg, newton_leipnik_reaction(ctx.spec.params), ctx.spec.master_ic());
    auto out = ctx.csv("pde.csv", {"t", "x", "u1", "u2", "u3"});
    for (const auto& snap : res.snapshots) write_field_rows(out, snap);
    const auto pr = probe(res.snapshots, ctx.spec.x_probe);
    auto pout = ctx.csv("probe.csv", {"t", "u1", "u2", "u3"});
    for (std::size_t i = 0; i < pr.t.size(); ++i) pout.row({pr.t[i], pr.values[i][0], pr.values[i][1], pr.values[i][2]});
    ctx.derived["probe_node_x"] = cfg.grid.x(pr.node);
}

void run_sync_kind(RunContext& ctx) {
    const auto& s = ctx.spec;
    SyncConfig cfg;
    cfg.rd = s.rd_config(ctx.threads);
    cfg.controller_enabled = s.controller;
    cfg.variant = s.controller_variant;
    cfg.master_ic = s.master_ic();
    cfg.slave_ic = s.slave_ic_field();
    cfg.error_norm_stride = s.error_norm_stride;
    describe_rd(ctx, cfg.rd);
    ctx.derived["slave_ic_rule"] = describe_slave_rule(s.slave_ic);
    ctx.derived["controller"] = s.controller;
    ctx.derived["controller_variant"] = variant_name(s.controller_variant);
    if (s.controller_variant == ControllerVariant::AsPrinted) {
        ctx.notes.push_back("as_printed controller keeps e1*e2 in phi_2; the cancellation of e1*e3 is then inexact");
    }

    const auto res = run_sync(cfg);
    ctx.derived["label"] = res.beyond_theorem ? "beyond-theorem" : "commensurate";

    auto out = ctx.csv("sync.csv", {"t", "x", "u1", "u2", "u3", "v1", "v2", "v3", "e1", "e2", "e3", "V"});
    for (const auto& snap : res.snapshots) {
        const auto& g = snap.master.grid();
        for (std::size_t j = 0; j < g.n_nodes(); ++j) {
            const auto u = snap.master.at(j);
            const auto v = snap.slave.at(j);
            const auto e = snap.error.at(j);
            out.row({snap.t, g.x(j), u[0], u[1], u[2], v[0], v[1], v[2], e[0], e[1], e[2], snap.lyapunov});
        }
    }
    auto norms = ctx.csv("error_norms.csv", {"t", "l2", "sup", "e1_sup", "e2_sup", "e3_sup", "V"});
    for (const auto& n : res.norms) {
        norms.row({n.t, n.l2, n.sup, n.component_sup[0], n.component_sup[1], n.component_sup[2], n.lyapunov});
    }
    const std::size_t node = cfg.rd.grid.nearest_node(s.x_probe);
    auto pout = ctx.csv("probe.csv", {"t", "u1", "u2", "u3", "v1", "v2", "v3"});
    for (const auto& snap : res.snapshots) {
        const auto u = snap.master.at(node);
        const auto v = snap.slave.at(node);
        pout.row({snap.t, u[0], u[1], u[2], v[0], v[1], v[2]});
    }
    if (!res.norms.empty()) {
        ctx.derived["initial_l2_error"] = res.norms.front().l2;
        ctx.derived["final_l2_error"] = res.norms.back().l2;
    }
}

}  // namespace

RunOutcome run(const ExperimentSpec& spec, const std::filesystem::path& out_dir, const RunOptions& options) {
    std::filesystem::create_directories(out_dir);
    RunContext ctx{spec, out_dir, std::max(1u, options.threads), json::object(), json::array(), {}};
    RunOutcome outcome;
    json status = "ok";
    const auto start = std::chrono::steady_clock::now();
    try {
        switch (spec.kind) {
            case ExperimentKind::Equilibria: run_equilibria(ctx); break;
            case ExperimentKind::Stability: run_stability(ctx); break;
            case ExperimentKind::Ode: run_ode(ctx); break;
            case ExperimentKind::Pde: run_pde(ctx); break;
            case ExperimentKind::Sync: run_sync_kind(ctx); break;
        }
    } catch (const DivergenceError& e) {
        outcome.exit_code = 3;
        outcome.message = std::string(e.what()) + "; last valid time " + format_double(e.last_valid_time());
        status = "diverged";
        ctx.derived["last_valid_time"] = e.last_valid_time();
        ctx.derived["failed_step"] = e.step();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json manifest;
    manifest["toolkit_version"] = toolkit_version();
    manifest["spec"] = spec_to_json(spec);
    manifest["status"] = status;
    manifest["wall_clock_seconds"] = seconds;
    manifest["derived"] = ctx.derived;
    manifest["notes"] = ctx.notes;
    json files = json::array();
    for (const auto& f : ctx.files) files.push_back(f.filename().string());
    manifest["files"] = files;

    outcome.manifest = out_dir / "manifest.json";
    std::ofstream mf(outcome.manifest);
    if (!mf) throw std::runtime_error("cannot write " + outcome.manifest.string());
    mf << manifest.dump(2) << '\n';
    outcome.files = ctx.files;
    return outcome;
}

}  // namespace fracnl
