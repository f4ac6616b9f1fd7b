#include "fracnl/pde.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "fracnl/errors.hpp"

namespace fracnl {

void laplacian_neumann(std::span<const double> w, double dx, std::span<double> out) {
    const std::size_t n = w.size();
    if (n < 3) throw DomainError("laplacian needs at least 3 nodes");
    const double inv = 1.0 / (dx * dx);
    out[0] = 2.0 * (w[1] - w[0]) * inv;
    for (std::size_t j = 1; j + 1 < n; ++j) out[j] = (w[j - 1] - 2.0 * w[j] + w[j + 1]) * inv;
    out[n - 1] = 2.0 * (w[n - 2] - w[n - 1]) * inv;
}

std::vector<double> laplacian_neumann(std::span<const double> w, double dx) {
    std::vector<double> out(w.size());
    laplacian_neumann(w, dx, out);
    return out;
}

Field paper_initial_conditions(const Grid1D& grid) {
    Field f(grid);
    for (std::size_t j = 0; j < grid.n_nodes(); ++j) {
        const double bump = 1.0 + 0.3 * std::cos(grid.x(j) / 2.0);
        f.set(j, State3(0.349 * bump, 0.0, -0.3 * bump));
    }
    return f;
}

void RDConfig::validate() const {
    params.validate();
    if (snapshot_stride < 1) throw ConfigError("snapshot_stride must be >= 1");
    if (memory_window && *memory_window < 1) throw ConfigError("memory_window must be >= 1");
}

ReactionFn newton_leipnik_reaction(const SystemParams& p) {
    return [p](double, const Field& u, Field& out) {
        for (std::size_t j = 0; j < u.n_nodes(); ++j) out.set(j, vector_field(p, u.at(j)));
    };
}

L1Stepper::L1Stepper(const RDConfig& cfg, const Field& initial)
    : grid_(cfg.grid),
      time_(cfg.time),
      window_(cfg.memory_window),
      threads_(std::max(1u, cfg.threads)),
      state_(initial),
      next_(initial) {
    cfg.validate();
    if (!(initial.grid() == cfg.grid)) throw ConfigError("initial field is not on the configured grid");
    const std::size_t n = grid_.n_nodes();
    const double inv_dx2 = 1.0 / (grid_.dx() * grid_.dx());
    for (std::size_t c = 0; c < 3; ++c) {
        auto& comp = comps_[c];
        comp.tau = l1_scale(cfg.orders[c], time_.dt);
        comp.diffusivity = cfg.params.d[c];
        comp.weights = l1_weights(cfg.orders[c], time_.n_steps + 1);
        comp.increments.assign(time_.n_steps * n, 0.0);

        const double off = -comp.diffusivity * inv_dx2;
        const double diag = comp.weights[0] / comp.tau - 2.0 * off;
        std::vector<double> sub(n, off), sup(n, off);
        sup[0] = 2.0 * off;
        sub[n - 1] = 2.0 * off;
        comp.lower = sub;
        comp.diag_inv.resize(n);
        comp.upper_mod.resize(n);
        double m = diag;
        comp.diag_inv[0] = 1.0 / m;
        comp.upper_mod[0] = sup[0] / m;
        for (std::size_t j = 1; j < n; ++j) {
            m = diag - sub[j] * comp.upper_mod[j - 1];
            comp.diag_inv[j] = 1.0 / m;
            comp.upper_mod[j] = j + 1 < n ? sup[j] / m : 0.0;
        }
    }
}

void L1Stepper::advance_component(std::size_t c, const Field& reaction) {
    auto& comp = comps_[c];
    const std::size_t n = grid_.n_nodes();
    const std::size_t k = k_ + 1;
    const auto prev = state_.component(c);
    const auto react = reaction.component(c);
    auto out = next_.component(c);

    // Memory term: sum_{m=1}^{k-1} b_m (u^{k-m} - u^{k-m-1}); increment u^s - u^{s-1} is row s-1.
    auto& memory = comp.memory;
    memory.assign(n, 0.0);
    const std::size_t last = window_ ? std::min(k - 1, *window_) : k - 1;
    for (std::size_t m = 1; m <= last; ++m) {
        const double bm = comp.weights[m];
        const double* row = comp.increments.data() + (k - m - 1) * n;
        for (std::size_t j = 0; j < n; ++j) memory[j] += bm * row[j];
    }
    const double lead = comp.weights[0] / comp.tau;
    const double inv_tau = 1.0 / comp.tau;
    for (std::size_t j = 0; j < n; ++j) out[j] = lead * prev[j] - inv_tau * memory[j] + react[j];

    // Thomas solve in place.
    out[0] *= comp.diag_inv[0];
    for (std::size_t j = 1; j < n; ++j) out[j] = (out[j] - comp.lower[j] * out[j - 1]) * comp.diag_inv[j];
    for (std::size_t j = n - 1; j-- > 0;) out[j] -= comp.upper_mod[j] * out[j + 1];

    double* inc = comp.increments.data() + (k - 1) * n;
    for (std::size_t j = 0; j < n; ++j) inc[j] = out[j] - prev[j];
}

void L1Stepper::step(const Field& reaction) {
    if (k_ >= time_.n_steps) throw ConfigError("stepper advanced past the end of its time grid");
    if (threads_ > 1) {
        std::vector<std::future<void>> tasks;
        for (std::size_t c = 1; c < 3; ++c) {
            tasks.push_back(std::async(std::launch::async, [this, c, &reaction] { advance_component(c, reaction); }));
        }
        advance_component(0, reaction);
        for (auto& t : tasks) t.get();
    } else {
        for (std::size_t c = 0; c < 3; ++c) advance_component(c, reaction);
    }
    for (double v : next_.data()) {
        if (!std::isfinite(v) || std::abs(v) > kDivergenceBound) {
            throw DivergenceError("solution diverged at step " + std::to_string(k_ + 1), k_ + 1, time());
        }
    }
    std::swap(state_, next_);
    ++k_;
}

RdResult simulate_rd(const RDConfig& cfg, const ReactionFn& reaction, const Field& initial) {
    L1Stepper stepper(cfg, initial);
    RdResult result;
    result.snapshots.push_back({cfg.time.time(0), initial});
    Field r(cfg.grid);
    for (std::size_t k = 1; k <= cfg.time.n_steps; ++k) {
        reaction(stepper.next_time(), stepper.state(), r);
        for (double v : r.data()) {
            if (!std::isfinite(v)) {
                throw DivergenceError("non-finite reaction at step " + std::to_string(k), k, stepper.time());
            }
        }
        stepper.step(r);
        if (k % cfg.snapshot_stride == 0 || k == cfg.time.n_steps) {
            result.snapshots.push_back({stepper.time(), stepper.state()});
        }
    }
    return result;
}

ProbeSeries probe(const std::vector<Snapshot>& snapshots, double x_probe) {
    ProbeSeries s;
    s.x = x_probe;
    if (snapshots.empty()) return s;
    s.node = snapshots.front().field.grid().nearest_node(x_probe);
    s.t.reserve(snapshots.size());
    s.values.reserve(snapshots.size());
    for (const auto& snap : snapshots) {
        s.t.push_back(snap.t);
        s.values.push_back(snap.field.at(s.node));
    }
    return s;
}

double spatial_spread(const Field& f) {
    double spread = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
        const auto comp = f.component(c);
        const auto [lo, hi] = std::minmax_element(comp.begin(), comp.end());
        spread = std::max(spread, *hi - *lo);
    }
    return spread;
}

}  // namespace fracnl
