#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace fracnl {

using State3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

/// Bifurcation parameters (a, alpha) and diffusivities d1..d3.
struct SystemParams {
    double a = 0.4;
    double alpha = 0.175;
    std::array<double, 3> d{0.1, 0.1, 0.1};

    /// Throws ConfigError on negative diffusivity or non-finite parameters.
    void validate() const;

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

// Fixed model coefficients.
inline constexpr double kDamping2 = 0.4;
inline constexpr double kCoupling1 = 10.0;
inline constexpr double kCoupling2 = 5.0;

State3 vector_field(const SystemParams& p, const State3& u);

Matrix3 jacobian(const SystemParams& p, const State3& u);

/// Divergence of the vector field, alpha - a - 0.4 (state independent).
double divergence(const SystemParams& p);

/// Phase-volume ratio V(t)/V(0) = exp(divergence * t).
double volume_factor(const SystemParams& p, double t);

struct Equilibrium {
    State3 point;
    double residual = 0.0;
};

struct EquilibriumSet {
    /// Origin first, then the rest ordered by (u3 ascending, u2 descending).
    std::vector<Equilibrium> points;
    /// Set when some Newton seeds failed and fewer than five roots were found.
    bool partial = false;
};

/// Roots of the vector field by damped Newton from a fixed seed lattice.
EquilibriumSet equilibria(const SystemParams& p);

/// (u1, u2, u3) -> (-u1, -u2, u3); the vector field commutes with it.
inline State3 mirror(const State3& u) { return {-u[0], -u[1], u[2]}; }

}  // namespace fracnl
