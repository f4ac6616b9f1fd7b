#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracnl {

/// Caputo order delta in (0, 1].
class FractionalOrder {
public:
    explicit FractionalOrder(double delta);

    double value() const noexcept { return delta_; }
    bool is_integer() const noexcept { return delta_ == 1.0; }

    friend bool operator==(const FractionalOrder&, const FractionalOrder&) = default;

private:
    double delta_;
};

/// Uniform time lattice t0, t0 + dt, ..., t0 + n_steps * dt.
struct TimeGrid {
    double t0 = 0.0;
    double dt = 0.0;
    std::size_t n_steps = 0;

    TimeGrid(double t0, double dt, std::size_t n_steps);

    /// Grid ending at (or just past rounding of) t_end.
    static TimeGrid until(double t0, double t_end, double dt);

    double time(std::size_t k) const noexcept { return t0 + static_cast<double>(k) * dt; }
    double t_end() const noexcept { return time(n_steps); }
};

/// Uniformly sampled past of one scalar signal. Samples are append-only.
class HistoryBuffer {
public:
    HistoryBuffer(double t0, double dt, double first_sample);
    HistoryBuffer(double t0, double dt, std::vector<double> samples);

    void append(double value) { samples_.push_back(value); }

    double t0() const noexcept { return t0_; }
    double dt() const noexcept { return dt_; }
    std::size_t size() const noexcept { return samples_.size(); }
    double latest_time() const noexcept { return t0_ + dt_ * static_cast<double>(samples_.size() - 1); }
    std::span<const double> samples() const noexcept { return samples_; }

private:
    double t0_;
    double dt_;
    std::vector<double> samples_;
};

/// L1 weights b_k = (k+1)^(1-delta) - k^(1-delta), k = 0..n-1.
std::vector<double> l1_weights(FractionalOrder order, std::size_t n);

/// Scale dt^delta * Gamma(2 - delta) dividing the L1 sum.
double l1_scale(FractionalOrder order, double dt);

/// L1 estimate of the Caputo derivative at the latest sample of `history`.
double caputo_eval(const HistoryBuffer& history, FractionalOrder order);

}  // namespace fracnl
