#include "fracnl/sync.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fracnl/errors.hpp"

namespace fracnl {

State3 control_law(const SystemParams& p, const State3& u, const State3& e, ControllerVariant variant) {
    const double cross2 = variant == ControllerVariant::Consistent ? e[0] * e[2] : e[0] * e[1];
    return {-kCoupling1 * (e[1] * e[2] + u[1] * e[2] + e[1] * u[2]),
            -kCoupling2 * (cross2 + u[0] * e[2] + e[0] * u[2]),
            kCoupling2 * (e[0] * e[1] + u[0] * e[1] + e[0] * u[1]) - (p.alpha + kDamping2) * e[2]};
}

Field control_signal(const SystemParams& p, const Field& master, const Field& error, ControllerVariant variant) {
    Field phi(master.grid());
    for (std::size_t j = 0; j < master.n_nodes(); ++j) phi.set(j, control_law(p, master.at(j), error.at(j), variant));
    return phi;
}

State3 linear_error_rhs(const SystemParams& p, const State3& e) {
    return {-p.a * e[0] + e[1], -e[0] - kDamping2 * e[1], -kDamping2 * e[2]};
}

double lyapunov_V(const Field& e) {
    const auto w = e.grid().trapezoid_weights();
    double v = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
        const auto comp = e.component(c);
        for (std::size_t j = 0; j < comp.size(); ++j) v += w[j] * comp[j] * comp[j];
    }
    return 0.5 * v;
}

double error_l2(const Field& e) { return std::sqrt(2.0 * lyapunov_V(e)); }

double error_sup(const Field& e) {
    double m = 0.0;
    for (double v : e.data()) m = std::max(m, std::abs(v));
    return m;
}

std::vector<double> mode_energies(const Field& e, std::size_t n_modes) {
    const auto& g = e.grid();
    const auto w = g.trapezoid_weights();
    std::vector<double> out(n_modes, 0.0);
    for (std::size_t i = 0; i < n_modes; ++i) {
        const double k = static_cast<double>(i) * std::numbers::pi / g.length();
        for (std::size_t c = 0; c < 3; ++c) {
            const auto comp = e.component(c);
            double inner = 0.0;
            for (std::size_t j = 0; j < comp.size(); ++j) inner += w[j] * comp[j] * std::cos(k * g.x(j));
            out[i] += inner * inner;
        }
    }
    return out;
}

namespace {

ErrorNormSample norm_sample(double t, const Field& e) {
    ErrorNormSample s;
    s.t = t;
    s.lyapunov = lyapunov_V(e);
    s.l2 = std::sqrt(2.0 * s.lyapunov);
    for (std::size_t c = 0; c < 3; ++c) {
        for (double v : e.component(c)) s.component_sup[c] = std::max(s.component_sup[c], std::abs(v));
    }
    s.sup = *std::max_element(s.component_sup.begin(), s.component_sup.end());
    return s;
}

}  // namespace

SyncResult run_sync(const SyncConfig& cfg) {
    const auto& rd = cfg.rd;
    rd.validate();
    if (!(cfg.master_ic.grid() == rd.grid) || !(cfg.slave_ic.grid() == rd.grid)) {
        throw ConfigError("master and slave initial fields must live on the configured grid");
    }
    if (cfg.error_norm_stride < 1) throw ConfigError("error_norm_stride must be >= 1");

    SyncResult result;
    result.beyond_theorem = !(rd.orders[0] == rd.orders[1] && rd.orders[1] == rd.orders[2]);

    L1Stepper master(rd, cfg.master_ic);
    L1Stepper slave(rd, cfg.slave_ic);
    const auto reaction = newton_leipnik_reaction(rd.params);
    Field master_r(rd.grid), slave_r(rd.grid);

    auto record = [&](bool snapshot, bool norms) {
        Field e = slave.state() - master.state();
        const double t = master.time();
        if (norms) result.norms.push_back(norm_sample(t, e));
        if (snapshot) {
            const double v = lyapunov_V(e);
            result.snapshots.push_back({t, master.state(), slave.state(), std::move(e), v});
        }
    };
    record(true, true);

    const std::size_t n_steps = rd.time.n_steps;
    for (std::size_t k = 1; k <= n_steps; ++k) {
        const double t = master.next_time();
        reaction(t, master.state(), master_r);
        reaction(t, slave.state(), slave_r);
        if (cfg.controller_enabled) {
            const Field e = slave.state() - master.state();
            const Field phi = control_signal(rd.params, master.state(), e, cfg.variant);
            auto sr = slave_r.data();
            const auto ph = phi.data();
            for (std::size_t i = 0; i < sr.size(); ++i) sr[i] += ph[i];
        }
        for (const Field* f : {&master_r, &slave_r}) {
            for (double v : f->data()) {
                if (!std::isfinite(v)) {
                    throw DivergenceError("non-finite reaction at step " + std::to_string(k), k, master.time());
                }
            }
        }
        master.step(master_r);
        slave.step(slave_r);
        const bool last = k == n_steps;
        record(k % rd.snapshot_stride == 0 || last, k % cfg.error_norm_stride == 0 || last);
    }
    return result;
}

RdResult integrate_linear_error(const RDConfig& cfg, const Field& e0) {
    const SystemParams p = cfg.params;
    const ReactionFn linear = [p](double, const Field& e, Field& out) {
        for (std::size_t j = 0; j < e.n_nodes(); ++j) out.set(j, linear_error_rhs(p, e.at(j)));
    };
    return simulate_rd(cfg, linear, e0);
}

}  // namespace fracnl
