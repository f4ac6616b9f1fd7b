#include "fracnl/newton_leipnik.hpp"

#include <algorithm>
#include <cmath>

#include "fracnl/errors.hpp"

namespace fracnl {

void SystemParams::validate() const {
    if (!std::isfinite(a) || !std::isfinite(alpha)) throw ConfigError("a and alpha must be finite");
    for (double di : d) {
        if (!(di >= 0.0) || !std::isfinite(di)) throw ConfigError("diffusivities must be finite and non-negative");
    }
}

State3 vector_field(const SystemParams& p, const State3& u) {
    return {-p.a * u[0] + u[1] + kCoupling1 * u[1] * u[2],
            -u[0] - kDamping2 * u[1] + kCoupling2 * u[0] * u[2],
            p.alpha * u[2] - kCoupling2 * u[0] * u[1]};
}

Matrix3 jacobian(const SystemParams& p, const State3& u) {
    Matrix3 j;
    j << -p.a, 1.0 + kCoupling1 * u[2], kCoupling1 * u[1],
         -1.0 + kCoupling2 * u[2], -kDamping2, kCoupling2 * u[0],
         -kCoupling2 * u[1], -kCoupling2 * u[0], p.alpha;
    return j;
}

double divergence(const SystemParams& p) { return p.alpha - p.a - kDamping2; }

double volume_factor(const SystemParams& p, double t) {
    if (!(t >= 0.0)) throw DomainError("volume_factor needs t >= 0");
    return std::exp(divergence(p) * t);
}

namespace {

constexpr double kResidualTol = 1e-8;
constexpr double kDedupTol = 1e-6;
constexpr int kMaxNewtonIters = 100;

std::vector<State3> seed_lattice() {
    std::vector<State3> seeds;
    const double levels[] = {-0.3, 0.0, 0.3};
    for (double x : levels)
        for (double y : levels)
            for (double z : levels) seeds.emplace_back(x, y, z);
    // Reference roots at (a, alpha) = (0.4, 0.175).
    seeds.emplace_back(-0.031549, 0.12238, -0.11031);
    seeds.emplace_back(0.031549, -0.12238, -0.11031);
    seeds.emplace_back(0.23897, 0.030803, 0.21031);
    seeds.emplace_back(-0.23897, -0.030803, 0.21031);
    return seeds;
}

// Damped Newton with backtracking on ||f||.
std::optional<State3> newton(const SystemParams& p, State3 u) {
    double norm = vector_field(p, u).norm();
    for (int it = 0; it < kMaxNewtonIters; ++it) {
        if (norm < 1e-14) break;
        const State3 f = vector_field(p, u);
        const Eigen::FullPivLU<Matrix3> lu(jacobian(p, u));
        if (!lu.isInvertible()) return std::nullopt;
        const State3 step = lu.solve(-f);
        double lambda = 1.0;
        bool improved = false;
        for (int ls = 0; ls < 30; ++ls) {
            const State3 trial = u + lambda * step;
            const double trial_norm = vector_field(p, trial).norm();
            if (trial_norm < norm || trial_norm < 1e-15) {
                u = trial;
                norm = trial_norm;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) break;
    }
    if (!u.allFinite() || norm > kResidualTol) return std::nullopt;
    return u;
}

}  // namespace

EquilibriumSet equilibria(const SystemParams& p) {
    EquilibriumSet out;
    out.points.push_back({State3::Zero(), 0.0});
    bool any_failed = false;
    for (const auto& seed : seed_lattice()) {
        const auto root = newton(p, seed);
        if (!root) {
            any_failed = true;
            continue;
        }
        const bool duplicate = std::any_of(out.points.begin(), out.points.end(), [&](const Equilibrium& e) {
            return (e.point - *root).norm() < kDedupTol;
        });
        if (!duplicate) out.points.push_back({*root, vector_field(p, *root).norm()});
    }
    std::sort(out.points.begin() + 1, out.points.end(), [](const Equilibrium& l, const Equilibrium& r) {
        if (std::abs(l.point[2] - r.point[2]) > kDedupTol) return l.point[2] < r.point[2];
        return l.point[1] > r.point[1];
    });
    out.partial = any_failed && out.points.size() < 5;
    return out;
}

}  // namespace fracnl
