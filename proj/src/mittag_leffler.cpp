#include "fracnl/mittag_leffler.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <mpfr.h>

#include "fracnl/errors.hpp"

namespace fracnl {
namespace {

constexpr double kMaxAbsZ = 50.0;
constexpr std::size_t kMaxSeriesTerms = 6000;
constexpr double kMaxTermDigits = 400.0;

class MpfrValue {
public:
    explicit MpfrValue(mpfr_prec_t bits) { mpfr_init2(v_, bits); }
    ~MpfrValue() { mpfr_clear(v_); }
    MpfrValue(const MpfrValue&) = delete;
    MpfrValue& operator=(const MpfrValue&) = delete;

    mpfr_ptr get() { return v_; }

private:
    mpfr_t v_;
};

struct SeriesPlan {
    std::size_t terms = 0;
    double log_max_term = 0.0;
    bool feasible = false;
};

SeriesPlan plan_series(double alpha, double z) {
    const double log_abs_z = std::log(std::abs(z));
    SeriesPlan plan;
    double log_max = 0.0;
    for (std::size_t k = 1; k <= kMaxSeriesTerms; ++k) {
        const double kk = static_cast<double>(k);
        const double log_term = kk * log_abs_z - std::lgamma(alpha * kk + 1.0);
        log_max = std::max(log_max, log_term);
        const double floor = z < 0.0 ? -45.0 : log_max - 45.0;
        if (log_term < floor && log_term < log_max) {
            plan.terms = k;
            plan.log_max_term = log_max;
            plan.feasible = log_max / std::numbers::ln10 <= kMaxTermDigits;
            return plan;
        }
    }
    return plan;
}

double series_value(double alpha, double z, const SeriesPlan& plan) {
    const auto extra_bits = z < 0.0 ? plan.log_max_term / std::numbers::ln2 : 0.0;
    const auto bits = static_cast<mpfr_prec_t>(96 + std::ceil(extra_bits));
    MpfrValue sum(bits), power(bits), zz(bits), arg(bits), g(bits), term(bits), a(bits);
    mpfr_set_d(zz.get(), z, MPFR_RNDN);
    mpfr_set_d(a.get(), alpha, MPFR_RNDN);
    mpfr_set_ui(sum.get(), 1, MPFR_RNDN);
    mpfr_set_ui(power.get(), 1, MPFR_RNDN);
    for (std::size_t k = 1; k <= plan.terms; ++k) {
        mpfr_mul(power.get(), power.get(), zz.get(), MPFR_RNDN);
        mpfr_mul_ui(arg.get(), a.get(), static_cast<unsigned long>(k), MPFR_RNDN);
        mpfr_add_ui(arg.get(), arg.get(), 1, MPFR_RNDN);
        mpfr_gamma(g.get(), arg.get(), MPFR_RNDN);
        mpfr_div(term.get(), power.get(), g.get(), MPFR_RNDN);
        mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
    }
    return mpfr_get_d(sum.get(), MPFR_RNDN);
}

// E_alpha(-x) = int_0^inf exp(-r t) K(r) dr with t = x^(1/alpha) and spectral density
// K(r) = sin(alpha pi)/pi * r^(alpha-1) / (r^(2 alpha) + 2 r^alpha cos(alpha pi) + 1).
double integral_value(double alpha, double x) {
    const double t = std::pow(x, 1.0 / alpha);
    const double s = std::sin(alpha * std::numbers::pi) / std::numbers::pi;
    const double c = std::cos(alpha * std::numbers::pi);
    auto integrand = [&](double u) {
        const double r = u / t;
        const double ra = std::pow(r, alpha);
        return std::exp(-u) * s * (ra / r) / (ra * ra + 2.0 * ra * c + 1.0) / t;
    };
    boost::math::quadrature::exp_sinh<double> quad;
    return quad.integrate(integrand, 1e-13);
}

}  // namespace

double mittag_leffler(double alpha, double z) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("mittag_leffler: alpha must lie in (0, 1], got " + std::to_string(alpha));
    }
    if (!std::isfinite(z) || std::abs(z) > kMaxAbsZ) {
        throw DomainError("mittag_leffler: |z| must not exceed 50, got " + std::to_string(z));
    }
    if (z == 0.0) return 1.0;
    if (alpha == 1.0) return std::exp(z);

    const auto plan = plan_series(alpha, z);
    double value = std::numeric_limits<double>::quiet_NaN();
    if (plan.feasible) {
        value = series_value(alpha, z, plan);
    } else if (z < 0.0) {
        value = integral_value(alpha, -z);
    } else {
        throw DomainError("mittag_leffler: value at alpha=" + std::to_string(alpha) + ", z=" + std::to_string(z) +
                          " exceeds double range");
    }
    if (!std::isfinite(value)) throw DomainError("mittag_leffler: result not representable");
    return value;
}

}  // namespace fracnl
