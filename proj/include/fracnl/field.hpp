#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fracnl/newton_leipnik.hpp"

namespace fracnl {

/// Uniform closed lattice x_j = j * dx on [0, L], n_nodes >= 3.
class Grid1D {
public:
    Grid1D(double length, std::size_t n_nodes);

    double length() const noexcept { return length_; }
    std::size_t n_nodes() const noexcept { return n_; }
    double dx() const noexcept { return length_ / static_cast<double>(n_ - 1); }
    double x(std::size_t j) const noexcept { return static_cast<double>(j) * dx(); }

    /// Index of the node nearest to x. Throws DomainError outside [0, L].
    std::size_t nearest_node(double x) const;

    /// Composite trapezoid weights.
    std::vector<double> trapezoid_weights() const;

    friend bool operator==(const Grid1D&, const Grid1D&) = default;

private:
    double length_;
    std::size_t n_;
};

/// Three state components sampled on a Grid1D, stored component-major.
class Field {
public:
    explicit Field(Grid1D grid, double fill = 0.0);

    const Grid1D& grid() const noexcept { return grid_; }
    std::size_t n_nodes() const noexcept { return grid_.n_nodes(); }

    std::span<double> component(std::size_t c) { return {data_.data() + c * n_nodes(), n_nodes()}; }
    std::span<const double> component(std::size_t c) const {
        return {data_.data() + c * n_nodes(), n_nodes()};
    }
    double& operator()(std::size_t c, std::size_t j) { return data_[c * n_nodes() + j]; }
    double operator()(std::size_t c, std::size_t j) const { return data_[c * n_nodes() + j]; }

    State3 at(std::size_t j) const { return {(*this)(0, j), (*this)(1, j), (*this)(2, j)}; }
    void set(std::size_t j, const State3& s) {
        for (std::size_t c = 0; c < 3; ++c) (*this)(c, j) = s[static_cast<Eigen::Index>(c)];
    }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    /// Field filled with the same state at every node.
    static Field uniform(const Grid1D& grid, const State3& s);

    friend bool operator==(const Field&, const Field&) = default;

private:
    Grid1D grid_;
    std::vector<double> data_;
};

Field operator-(const Field& a, const Field& b);

}  // namespace fracnl
