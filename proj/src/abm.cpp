#include "fracnl/abm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracnl/errors.hpp"
#include "fracnl/gamma.hpp"

namespace fracnl {
namespace {

// Weights indexed by lag q = n - j for one component.
struct AbmWeights {
    std::vector<double> predictor;  // (q+1)^d - q^d
    std::vector<double> corrector;  // (q+2)^{d+1} + q^{d+1} - 2 (q+1)^{d+1}, valid for j >= 1
    std::vector<double> pow_d;      // k^d
    std::vector<double> pow_d1;     // k^{d+1}
    double delta = 1.0;
    double pred_scale = 0.0;
    double corr_scale = 0.0;

    AbmWeights(double d, double h, std::size_t n_steps) : delta(d) {
        pow_d.resize(n_steps + 3);
        pow_d1.resize(n_steps + 3);
        for (std::size_t k = 0; k < n_steps + 3; ++k) {
            const double kk = static_cast<double>(k);
            pow_d[k] = std::pow(kk, d);
            pow_d1[k] = std::pow(kk, d + 1.0);
        }
        predictor.resize(n_steps + 1);
        corrector.resize(n_steps + 1);
        for (std::size_t q = 0; q <= n_steps; ++q) {
            predictor[q] = pow_d[q + 1] - pow_d[q];
            corrector[q] = pow_d1[q + 2] + pow_d1[q] - 2.0 * pow_d1[q + 1];
        }
        pred_scale = std::pow(h, d) / gamma_fn(d + 1.0);
        corr_scale = std::pow(h, d) / gamma_fn(d + 2.0);
    }

    // Weight of f_0 in the corrector at step n -> n+1.
    double corrector_first(std::size_t n) const {
        const double nn = static_cast<double>(n);
        return pow_d1[n] - (nn - delta) * pow_d[n + 1];
    }
};

void check_finite(std::span<const double> f, std::size_t step, double last_time) {
    for (double v : f) {
        if (!std::isfinite(v)) {
            throw DivergenceError("non-finite vector field at step " + std::to_string(step), step, last_time);
        }
    }
}

}  // namespace

Trajectory abm_solve(const VectorField& rhs, std::span<const double> x0,
                     std::span<const FractionalOrder> orders, const TimeGrid& grid, const AbmOptions& options) {
    const std::size_t dim = x0.size();
    if (orders.size() != dim) throw DomainError("abm_solve: one order per component required");
    const std::size_t n_steps = grid.n_steps;
    const double h = grid.dt;

    std::vector<AbmWeights> weights;
    weights.reserve(dim);
    for (const auto& o : orders) weights.emplace_back(o.value(), h, n_steps);

    Trajectory out{grid, dim, std::vector<double>((n_steps + 1) * dim)};
    std::copy(x0.begin(), x0.end(), out.values.begin());

    // f history, component-major: fh[i * (n_steps + 1) + j].
    std::vector<double> fh((n_steps + 1) * dim);
    std::vector<double> f(dim), pred(dim), corr(dim);

    rhs(grid.time(0), x0, f);
    check_finite(f, 0, grid.t0);
    for (std::size_t i = 0; i < dim; ++i) fh[i * (n_steps + 1)] = f[i];

    for (std::size_t n = 0; n < n_steps; ++n) {
        const std::size_t first =
            options.memory_window && n + 1 > *options.memory_window ? n + 1 - *options.memory_window : 0;
        for (std::size_t i = 0; i < dim; ++i) {
            const auto& w = weights[i];
            const double* fi = fh.data() + i * (n_steps + 1);
            double sum = 0.0;
            for (std::size_t j = first; j <= n; ++j) sum += w.predictor[n - j] * fi[j];
            pred[i] = x0[i] + w.pred_scale * sum;
        }
        const double t_next = grid.time(n + 1);
        rhs(t_next, pred, f);
        check_finite(f, n + 1, grid.time(n));

        for (std::size_t i = 0; i < dim; ++i) {
            const auto& w = weights[i];
            const double* fi = fh.data() + i * (n_steps + 1);
            double sum = f[i];
            std::size_t j = first;
            if (j == 0) {
                sum += w.corrector_first(n) * fi[0];
                j = 1;
            }
            for (; j <= n; ++j) sum += w.corrector[n - j] * fi[j];
            corr[i] = x0[i] + w.corr_scale * sum;
        }
        std::copy(corr.begin(), corr.end(), out.values.begin() + static_cast<std::ptrdiff_t>((n + 1) * dim));

        rhs(t_next, corr, f);
        check_finite(f, n + 1, grid.time(n));
        for (std::size_t i = 0; i < dim; ++i) fh[i * (n_steps + 1) + n + 1] = f[i];
    }
    return out;
}

}  // namespace fracnl
