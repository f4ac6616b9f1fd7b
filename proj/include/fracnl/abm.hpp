#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fracnl/caputo.hpp"

namespace fracnl {

/// f(t, x, out): writes the vector field at (t, x) into out.
using VectorField = std::function<void(double, std::span<const double>, std::span<double>)>;

struct AbmOptions {
    /// Short-memory window in steps. Empty means full memory.
    std::optional<std::size_t> memory_window;
};

/// Dense solution on a TimeGrid; row k holds the state at grid.time(k).
struct Trajectory {
    TimeGrid grid;
    std::size_t dim = 0;
    std::vector<double> values;

    std::span<const double> state(std::size_t k) const { return {values.data() + k * dim, dim}; }
    double at(std::size_t k, std::size_t i) const { return values[k * dim + i]; }
    std::size_t size() const noexcept { return grid.n_steps + 1; }
};

/// Fractional Adams-Bashforth-Moulton predictor-corrector (one corrector pass) for
/// D^{delta_i} x_i = f_i(t, x), one Caputo order per component.
/// Throws DivergenceError carrying the step index on a non-finite field value.
Trajectory abm_solve(const VectorField& rhs, std::span<const double> x0,
                     std::span<const FractionalOrder> orders, const TimeGrid& grid,
                     const AbmOptions& options = {});

}  // namespace fracnl
