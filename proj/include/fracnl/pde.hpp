#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fracnl/caputo.hpp"
#include "fracnl/field.hpp"
#include "fracnl/newton_leipnik.hpp"

namespace fracnl {

/// Second-order Neumann Laplacian with mirrored ghost nodes.
void laplacian_neumann(std::span<const double> w, double dx, std::span<double> out);
std::vector<double> laplacian_neumann(std::span<const double> w, double dx);

/// u1 = 0.349 (1 + 0.3 cos(x/2)), u2 = 0, u3 = -0.3 (1 + 0.3 cos(x/2)).
Field paper_initial_conditions(const Grid1D& grid);

struct RDConfig {
    SystemParams params;
    std::array<FractionalOrder, 3> orders{FractionalOrder(1.0), FractionalOrder(1.0), FractionalOrder(1.0)};
    Grid1D grid{20.0, 201};
    TimeGrid time{0.0, 0.005, 10000};
    std::optional<std::size_t> memory_window;
    std::size_t snapshot_stride = 20;
    /// Worker cap for per-component work inside a step. Results do not depend on it.
    unsigned threads = 1;

    void validate() const;
};

/// reaction(t, state, out): reaction term at time t, evaluated on the lagged state.
using ReactionFn = std::function<void(double, const Field&, Field&)>;

/// Pointwise Newton-Leipnik reaction for params p.
ReactionFn newton_leipnik_reaction(const SystemParams& p);

inline constexpr double kDivergenceBound = 1e6;

/// L1 time stepper for D^{delta_i} u_i - d_i Lap u_i = R_i with implicit diffusion.
///
/// Each step solves (b_0/tau_i) u^k - d_i Lap u^k = (b_0/tau_i) u^{k-1}
///   - (1/tau_i) sum_{m>=1} b_m (u^{k-m} - u^{k-m-1}) + R_i,  tau_i = dt^{delta_i} Gamma(2 - delta_i),
/// with a precomputed tridiagonal factorization per component. The increment history is
/// stored in full, so memory is O(n_nodes * n_steps) per component.
class L1Stepper {
public:
    L1Stepper(const RDConfig& cfg, const Field& initial);

    /// Advances one step given the reaction evaluated at the current (lagged) state.
    /// Throws DivergenceError if the new state is non-finite or exceeds kDivergenceBound.
    void step(const Field& reaction);

    const Field& state() const noexcept { return state_; }
    std::size_t steps_taken() const noexcept { return k_; }
    double time() const noexcept { return time_.time(k_); }
    double next_time() const noexcept { return time_.time(k_ + 1); }

private:
    struct Component {
        double tau = 1.0;
        double diffusivity = 0.0;
        std::vector<double> weights;
        // Thomas factors for the constant tridiagonal matrix.
        std::vector<double> lower, diag_inv, upper_mod;
        std::vector<double> increments;  // row s-1 holds u^s - u^{s-1}
        std::vector<double> memory;
    };

    void advance_component(std::size_t c, const Field& reaction);

    Grid1D grid_;
    TimeGrid time_;
    std::optional<std::size_t> window_;
    unsigned threads_;
    std::array<Component, 3> comps_;
    Field state_;
    Field next_;
    std::size_t k_ = 0;
};

struct Snapshot {
    double t = 0.0;
    Field field;
};

struct RdResult {
    std::vector<Snapshot> snapshots;
};

/// Runs the stepper over cfg.time, keeping the initial field, every snapshot_stride-th
/// step, and the final step.
RdResult simulate_rd(const RDConfig& cfg, const ReactionFn& reaction, const Field& initial);

struct ProbeSeries {
    double x = 0.0;
    std::size_t node = 0;
    std::vector<double> t;
    std::vector<State3> values;
};

/// Nearest-node time series at x_probe. Throws DomainError outside [0, L].
ProbeSeries probe(const std::vector<Snapshot>& snapshots, double x_probe);

/// Max over components of (max_j u - min_j u).
double spatial_spread(const Field& f);

}  // namespace fracnl
