#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fracnl/caputo.hpp"
#include "fracnl/newton_leipnik.hpp"

namespace fracnl {

using Complex = std::complex<double>;

struct StabilityReport {
    std::vector<Complex> eigenvalues;
    /// min_i |arg lambda_i|, arguments taken in (-pi, pi].
    double worst_arg = 0.0;
    /// Critical commensurate order (2/pi) * worst_arg, in [0, 2].
    double margin = 0.0;
    std::map<double, bool> stable_at;

    /// Matignon verdict for commensurate order delta: stable iff delta < margin.
    bool stable_for(double delta) const { return delta < margin; }
};

/// Eigenvalue-argument test for a commensurate-order linearization.
/// `query_orders` are recorded in stable_at.
StabilityReport matignon_margin(const Matrix3& jac, const std::vector<double>& query_orders = {});

/// Positive rational l/m in lowest terms.
struct Rational {
    std::int64_t num = 1;
    std::int64_t den = 1;

    Rational(std::int64_t num, std::int64_t den);
    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Rational&, const Rational&) = default;
};

/// Continued-fraction approximation with denominator at most max_den.
Rational rationalize(double x, std::int64_t max_den = 100);

struct DengResult {
    bool stable = false;
    std::int64_t lcm = 1;
    int degree = 0;
    /// pi / (2m).
    double threshold = 0.0;
    /// Roots of the characteristic polynomial sorted by |arg| ascending.
    std::vector<Complex> roots;
    /// max over roots of |charpoly(root)| / (1e-8 (1 + |root|)^degree); at most 1 when the roots are accepted.
    double max_residual_ratio = 0.0;
};

inline constexpr std::int64_t kDengMaxLcm = 1000;

/// Incommensurate-order test: roots of det(diag(s^{m d_i}) - J) against |arg s| > pi/(2m).
/// Orders must lie in (0, 1]. Throws DomainError when lcm of denominators exceeds kDengMaxLcm.
DengResult deng_stable(const Matrix3& jac, const std::array<Rational, 3>& orders);

/// Neumann Laplacian eigenvalues (i pi / L)^2, i = 0..n_max, on [0, L].
std::vector<double> neumann_spectrum(double length, std::size_t n_max);

/// Eigenvalues of the linear error operator restricted to one Laplacian mode.
struct ModeEigen {
    double lambda_i = 0.0;
    std::array<Complex, 3> xi;
    /// True when xi_1,2 form a complex pair ((d1 - d2)^2 lambda^2 < 4).
    bool complex_branch = true;
};

ModeEigen sync_mode_eigen(const SystemParams& p, double lambda_i);

struct ModeCheck {
    std::size_t index = 0;
    ModeEigen eigen;
    /// min(|arg xi_1|, |arg xi_2|).
    double arg = 0.0;
    /// Whether the mode falls under the arg condition (complex branch).
    bool constrained = false;
    bool satisfied = true;
};

struct SyncConditionReport {
    bool satisfied = true;
    double delta = 1.0;
    std::vector<ModeCheck> modes;
    /// Index into `modes` of the constrained mode with the smallest arg, if any.
    std::size_t worst_mode = 0;
    /// Some complex-branch modes may lie beyond n_max.
    bool truncated = false;
    /// Equal d1 = d2: every mode is on the complex branch.
    bool equal_diffusivity = false;
    std::string note;
};

/// Checks |arg xi_1,2| > delta pi / 2 for every Neumann mode with lambda_i < 2/|d1 - d2|
/// (every mode when d1 = d2), for i = 0..n_max.
SyncConditionReport sync_condition_check(const SystemParams& p, FractionalOrder delta, double length,
                                         std::size_t n_max);

/// Argument in (-pi, pi]; arg(0) is 0.
double principal_arg(Complex z);

}  // namespace fracnl
