#include "fracnl/field.hpp"

#include <cmath>
#include <string>

#include "fracnl/errors.hpp"

namespace fracnl {

Grid1D::Grid1D(double length, std::size_t n_nodes) : length_(length), n_(n_nodes) {
    if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("grid length must be positive");
    if (n_nodes < 3) throw DomainError("grid needs at least 3 nodes");
}

std::size_t Grid1D::nearest_node(double x) const {
    if (!(x >= 0.0 && x <= length_)) {
        throw DomainError("probe coordinate " + std::to_string(x) + " outside [0, " + std::to_string(length_) + "]");
    }
    return static_cast<std::size_t>(std::lround(x / dx()));
}

std::vector<double> Grid1D::trapezoid_weights() const {
    std::vector<double> w(n_, dx());
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

Field::Field(Grid1D grid, double fill) : grid_(grid), data_(3 * grid.n_nodes(), fill) {}

Field Field::uniform(const Grid1D& grid, const State3& s) {
    Field f(grid);
    for (std::size_t j = 0; j < grid.n_nodes(); ++j) f.set(j, s);
    return f;
}

Field operator-(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw ConfigError("field grids differ");
    Field out(a.grid());
    auto o = out.data();
    auto x = a.data();
    auto y = b.data();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] - y[i];
    return out;
}

}  // namespace fracnl
