#pragma once

namespace fracnl {

/// One-parameter Mittag-Leffler function E_alpha(z) for alpha in (0, 1], |z| <= 50.
///
/// Evaluated by the power series in MPFR arithmetic, with the working precision
/// sized to the largest term so alternating cancellation for z < 0 is harmless.
/// When the series would need too many terms (small alpha, large negative z) the
/// Laplace-type integral over the spectral density is used instead. Absolute
/// error is below 1e-10 wherever the result is representable.
///
/// Throws DomainError outside the supported regime or when the value overflows.
double mittag_leffler(double alpha, double z);

}  // namespace fracnl
