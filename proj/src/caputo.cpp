#include "fracnl/caputo.hpp"

#include <cmath>
#include <string>

#include "fracnl/errors.hpp"
#include "fracnl/gamma.hpp"

namespace fracnl {

FractionalOrder::FractionalOrder(double delta) : delta_(delta) {
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw DomainError("fractional order must lie in (0, 1], got " + std::to_string(delta));
    }
}

TimeGrid::TimeGrid(double t0, double dt, std::size_t n_steps) : t0(t0), dt(dt), n_steps(n_steps) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("time step must be positive");
    if (n_steps < 1) throw DomainError("time grid needs at least one step");
}

TimeGrid TimeGrid::until(double t0, double t_end, double dt) {
    if (!(dt > 0.0)) throw DomainError("time step must be positive");
    const double n = std::round((t_end - t0) / dt);
    if (!(n >= 1.0)) throw DomainError("time horizon shorter than one step");
    return TimeGrid(t0, dt, static_cast<std::size_t>(n));
}

HistoryBuffer::HistoryBuffer(double t0, double dt, double first_sample)
    : HistoryBuffer(t0, dt, std::vector<double>{first_sample}) {}

HistoryBuffer::HistoryBuffer(double t0, double dt, std::vector<double> samples)
    : t0_(t0), dt_(dt), samples_(std::move(samples)) {
    if (!(dt > 0.0)) throw DomainError("history step must be positive");
    if (samples_.empty()) throw InsufficientHistoryError("history needs at least one sample");
}

std::vector<double> l1_weights(FractionalOrder order, std::size_t n) {
    const double p = 1.0 - order.value();
    std::vector<double> b(n);
    double prev = 0.0;  // k^p at k = 0
    for (std::size_t k = 0; k < n; ++k) {
        const double next = std::pow(static_cast<double>(k + 1), p);
        b[k] = next - prev;
        prev = next;
    }
    return b;
}

double l1_scale(FractionalOrder order, double dt) {
    return std::pow(dt, order.value()) * gamma_fn(2.0 - order.value());
}

double caputo_eval(const HistoryBuffer& history, FractionalOrder order) {
    const auto x = history.samples();
    const std::size_t n = x.size();
    if (n < 2) throw InsufficientHistoryError("caputo_eval needs at least two samples");
    const auto b = l1_weights(order, n - 1);
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        sum += b[j] * (x[n - 1 - j] - x[n - 2 - j]);
    }
    return sum / l1_scale(order, history.dt());
}

}  // namespace fracnl
