#include "fracnl/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "fracnl/errors.hpp"
#include "fracnl/polynomial.hpp"

namespace fracnl {

double principal_arg(Complex z) {
    if (z == Complex(0.0, 0.0)) return 0.0;
    const double a = std::arg(z);
    // std::arg returns -pi for (negative, -0.0); fold onto pi.
    return a == -std::numbers::pi ? std::numbers::pi : a;
}

StabilityReport matignon_margin(const Matrix3& jac, const std::vector<double>& query_orders) {
    StabilityReport r;
    const Eigen::EigenSolver<Matrix3> es(jac, false);
    const auto ev = es.eigenvalues();
    r.eigenvalues.assign(ev.begin(), ev.end());
    r.worst_arg = std::numbers::pi;
    for (const auto& l : r.eigenvalues) r.worst_arg = std::min(r.worst_arg, std::abs(principal_arg(l)));
    r.margin = 2.0 / std::numbers::pi * r.worst_arg;
    for (double q : query_orders) r.stable_at[q] = r.stable_for(q);
    return r;
}

Rational::Rational(std::int64_t n, std::int64_t d) {
    if (n <= 0 || d <= 0) throw DomainError("rational order must be positive");
    const auto g = std::gcd(n, d);
    num = n / g;
    den = d / g;
}

Rational rationalize(double x, std::int64_t max_den) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("can only rationalize positive finite values");
    if (max_den < 1) throw DomainError("denominator cap must be >= 1");
    // Convergents p/q of the continued fraction, then the best semiconvergent under the cap.
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = x;
    for (int iter = 0; iter < 64; ++iter) {
        const double a_real = std::floor(r);
        const auto a = static_cast<std::int64_t>(a_real);
        const std::int64_t q2 = q0 + a * q1;
        if (q2 > max_den) break;
        const std::int64_t p2 = p0 + a * p1;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        const double frac = r - a_real;
        if (frac < 1e-12 || std::abs(x - static_cast<double>(p1) / static_cast<double>(q1)) < 1e-15 * x) break;
        r = 1.0 / frac;
    }
    if (q1 == 0) return Rational(1, max_den);
    const std::int64_t k = (max_den - q0) / q1;
    const std::int64_t ps = p0 + k * p1, qs = q0 + k * q1;
    const double best = static_cast<double>(p1) / static_cast<double>(q1);
    if (ps > 0 && qs > 0 &&
        std::abs(static_cast<double>(ps) / static_cast<double>(qs) - x) < std::abs(best - x)) {
        return Rational(ps, qs);
    }
    return Rational(std::max<std::int64_t>(p1, 1), q1);
}

DengResult deng_stable(const Matrix3& jac, const std::array<Rational, 3>& orders) {
    DengResult out;
    std::int64_t m = 1;
    for (const auto& o : orders) {
        if (o.num > o.den) throw DomainError("Deng test needs orders in (0, 1]");
        m = std::lcm(m, o.den);
        if (m > kDengMaxLcm) {
            throw DomainError("Deng test refused: lcm of order denominators is " + std::to_string(m) +
                              ", above the polynomial degree bound " + std::to_string(kDengMaxLcm));
        }
    }
    out.lcm = m;
    std::array<std::size_t, 3> powers{};
    for (std::size_t i = 0; i < 3; ++i) powers[i] = static_cast<std::size_t>(m / orders[i].den * orders[i].num);

    // A = diag(s^{n_i}) - J, expanded along the first row.
    auto entry = [&](Eigen::Index i, Eigen::Index j) {
        Polynomial e = Polynomial::constant(-jac(i, j));
        if (i == j) e = e + Polynomial::monomial(powers[static_cast<std::size_t>(i)]);
        return e;
    };
    const Polynomial charpoly = entry(0, 0) * (entry(1, 1) * entry(2, 2) - entry(1, 2) * entry(2, 1)) -
                                entry(0, 1) * (entry(1, 0) * entry(2, 2) - entry(1, 2) * entry(2, 0)) +
                                entry(0, 2) * (entry(1, 0) * entry(2, 1) - entry(1, 1) * entry(2, 0));
    out.degree = charpoly.degree();
    out.threshold = std::numbers::pi / (2.0 * static_cast<double>(m));
    out.roots = polynomial_roots(charpoly);
    std::sort(out.roots.begin(), out.roots.end(),
              [](Complex l, Complex r) { return std::abs(principal_arg(l)) < std::abs(principal_arg(r)); });
    for (const auto& root : out.roots) {
        const double bound = 1e-8 * std::pow(1.0 + std::abs(root), out.degree);
        out.max_residual_ratio = std::max(out.max_residual_ratio, std::abs(charpoly(root)) / bound);
    }
    out.stable = std::all_of(out.roots.begin(), out.roots.end(),
                             [&](Complex r) { return std::abs(principal_arg(r)) > out.threshold; });
    return out;
}

std::vector<double> neumann_spectrum(double length, std::size_t n_max) {
    if (!(length > 0.0)) throw DomainError("domain length must be positive");
    if (n_max < 1) throw DomainError("n_max must be >= 1");
    std::vector<double> out(n_max + 1);
    for (std::size_t i = 0; i <= n_max; ++i) {
        const double k = static_cast<double>(i) * std::numbers::pi / length;
        out[i] = k * k;
    }
    return out;
}

ModeEigen sync_mode_eigen(const SystemParams& p, double lambda_i) {
    if (!(lambda_i >= 0.0)) throw DomainError("Laplacian eigenvalue must be non-negative");
    const auto [d1, d2, d3] = p.d;
    // 2x2 block [[-d1 l - a, 1], [-1, -d2 l - 0.4]]; a = 0.4 gives trace -(d1+d2) l - 0.8.
    const double p1 = d1 * lambda_i + p.a;
    const double p2 = d2 * lambda_i + kDamping2;
    const double trace = -(p1 + p2);
    const double gap = p1 - p2;
    const double disc = gap * gap - 4.0;

    ModeEigen m;
    m.lambda_i = lambda_i;
    if (disc < 0.0) {
        const double im = 0.5 * std::sqrt(-disc);
        m.xi[0] = {0.5 * trace, im};
        m.xi[1] = {0.5 * trace, -im};
        m.complex_branch = true;
    } else {
        // trace < 0: take the larger-magnitude root first, the other from the product.
        const double det = p1 * p2 + 1.0;
        const double big = 0.5 * (trace - std::sqrt(disc));
        m.xi[0] = {big, 0.0};
        m.xi[1] = {det / big, 0.0};
        m.complex_branch = false;
    }
    m.xi[2] = {-d3 * lambda_i - kDamping2, 0.0};
    return m;
}

SyncConditionReport sync_condition_check(const SystemParams& p, FractionalOrder delta, double length,
                                         std::size_t n_max) {
    SyncConditionReport rep;
    rep.delta = delta.value();
    const auto spectrum = neumann_spectrum(length, n_max);
    const double bound = delta.value() * std::numbers::pi / 2.0;
    rep.equal_diffusivity = p.d[0] == p.d[1];
    rep.modes.reserve(spectrum.size());

    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        ModeCheck mc;
        mc.index = i;
        mc.eigen = sync_mode_eigen(p, spectrum[i]);
        mc.arg = std::min(std::abs(principal_arg(mc.eigen.xi[0])), std::abs(principal_arg(mc.eigen.xi[1])));
        mc.constrained = mc.eigen.complex_branch;
        mc.satisfied = !mc.constrained || mc.arg > bound;
        if (mc.constrained && mc.arg < worst) {
            worst = mc.arg;
            rep.worst_mode = i;
        }
        rep.satisfied = rep.satisfied && mc.satisfied;
        rep.modes.push_back(mc);
    }
    if (rep.equal_diffusivity) {
        rep.note = "d1 == d2: every mode lies on the complex branch; modes beyond n_max have larger |arg|";
    } else {
        rep.truncated = rep.modes.back().eigen.complex_branch;
        if (rep.truncated) rep.note = "complex-branch modes continue beyond n_max";
    }
    return rep;
}

}  // namespace fracnl
