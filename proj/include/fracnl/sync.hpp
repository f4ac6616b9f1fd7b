#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fracnl/field.hpp"
#include "fracnl/pde.hpp"

namespace fracnl {

/// Which form of the second control component to use. The printed law carries
/// e1*e2 in phi_2; the cross term of v1 v3 - u1 u3 is e1*e3, which is the default.
enum class ControllerVariant { Consistent, AsPrinted };

/// Nonlinear feedback phi(u, e) cancelling the bilinear error coupling.
State3 control_law(const SystemParams& p, const State3& u, const State3& e,
                   ControllerVariant variant = ControllerVariant::Consistent);

/// Control field phi at every node from the master state and the current error.
Field control_signal(const SystemParams& p, const Field& master, const Field& error,
                     ControllerVariant variant = ControllerVariant::Consistent);

/// Reaction of the closed-loop linear error system:
/// (-a e1 + e2, -e1 - 0.4 e2, -0.4 e3).
State3 linear_error_rhs(const SystemParams& p, const State3& e);

struct SyncConfig {
    RDConfig rd;
    bool controller_enabled = true;
    ControllerVariant variant = ControllerVariant::Consistent;
    Field master_ic{Grid1D(20.0, 201)};
    Field slave_ic{Grid1D(20.0, 201)};
    std::size_t error_norm_stride = 1;
};

struct SyncSnapshot {
    double t = 0.0;
    Field master;
    Field slave;
    Field error;
    double lyapunov = 0.0;
};

struct ErrorNormSample {
    double t = 0.0;
    double l2 = 0.0;
    double sup = 0.0;
    std::array<double, 3> component_sup{};
    double lyapunov = 0.0;
};

struct SyncResult {
    std::vector<SyncSnapshot> snapshots;
    std::vector<ErrorNormSample> norms;
    /// Orders differ between components, so the commensurate theorem does not cover the run.
    bool beyond_theorem = false;
};

/// Co-integrates master and slave on a shared grid and records error diagnostics.
/// Throws ConfigError on grid mismatch; solver errors propagate.
SyncResult run_sync(const SyncConfig& cfg);

/// Integrates the linear error system directly from e0 with the same stepper.
RdResult integrate_linear_error(const RDConfig& cfg, const Field& e0);

/// V = 1/2 * integral of (e1^2 + e2^2 + e3^2), trapezoid rule.
double lyapunov_V(const Field& e);

/// L2(Omega) norm over all three components, trapezoid rule.
double error_l2(const Field& e);

/// Max |e| over nodes and components.
double error_sup(const Field& e);

/// Energies sum_c <e_c, cos(i pi x / L)>^2 for i = 0..n_modes-1 (trapezoid inner products).
std::vector<double> mode_energies(const Field& e, std::size_t n_modes);

}  // namespace fracnl
