#pragma once

namespace fracnl {

/// Gamma function for x > 0 via a Lanczos approximation (g = 7, 9 terms).
/// Relative error stays below 1e-12 on (0, 30]. Throws DomainError for x <= 0.
double gamma_fn(double x);

}  // namespace fracnl
