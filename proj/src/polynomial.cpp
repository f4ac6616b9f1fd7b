#include "fracnl/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

namespace fracnl {

Polynomial::Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::monomial(std::size_t power, double coeff) {
    std::vector<double> c(power + 1, 0.0);
    c[power] = coeff;
    return Polynomial(std::move(c));
}

void Polynomial::trim() {
    while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
}

std::complex<double> Polynomial::operator()(std::complex<double> x) const {
    std::complex<double> acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.c_.empty() || b.c_.empty()) return Polynomial();
    std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0.0) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return Polynomial(std::move(c));
}

Polynomial operator*(double s, const Polynomial& a) {
    auto c = a.c_;
    for (auto& v : c) v *= s;
    return Polynomial(std::move(c));
}

namespace {

using cd = std::complex<double>;

// p(z) and p'(z) by Horner, coefficients ascending.
std::pair<cd, cd> eval_with_derivative(std::span<const double> c, cd z) {
    cd p = 0.0, dp = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        dp = dp * z + p;
        p = p * z + *it;
    }
    return {p, dp};
}

std::vector<cd> companion_roots(std::span<const double> c) {
    const auto n = static_cast<Eigen::Index>(c.size() - 1);
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) comp(i, n - 1) = -c[static_cast<std::size_t>(i)] / c.back();
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    std::vector<cd> roots(es.eigenvalues().begin(), es.eigenvalues().end());
    return roots;
}

bool aberth(std::span<const double> c, std::vector<cd>& z) {
    const std::size_t n = c.size() - 1;
    const double radius = std::pow(std::abs(c.front() / c.back()), 1.0 / static_cast<double>(n));
    z.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
        z[k] = std::polar(radius, theta);
    }
    std::vector<bool> done(n, false);
    for (int iter = 0; iter < 1000; ++iter) {
        bool all_done = true;
        for (std::size_t k = 0; k < n; ++k) {
            if (done[k]) continue;
            const auto [p, dp] = eval_with_derivative(c, z[k]);
            if (p == 0.0) {
                done[k] = true;
                continue;
            }
            const cd ratio = p / dp;
            cd repulsion = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != k) repulsion += 1.0 / (z[k] - z[j]);
            }
            const cd w = ratio / (1.0 - ratio * repulsion);
            z[k] -= w;
            if (std::abs(w) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(z[k]))) {
                done[k] = true;
            } else {
                all_done = false;
            }
        }
        if (all_done) return true;
    }
    return false;
}

bool residuals_ok(std::span<const double> c, const std::vector<cd>& roots) {
    const double deg = static_cast<double>(c.size() - 1);
    const double lead = std::abs(c.back());
    return std::all_of(roots.begin(), roots.end(), [&](cd r) {
        const auto [p, dp] = eval_with_derivative(c, r);
        return std::abs(p) / lead <= 1e-8 * std::pow(1.0 + std::abs(r), deg);
    });
}

}  // namespace

std::vector<std::complex<double>> polynomial_roots(const Polynomial& p) {
    auto coeffs = p.coeffs();
    std::vector<cd> roots;
    std::size_t zero_roots = 0;
    while (zero_roots + 1 < coeffs.size() && coeffs[zero_roots] == 0.0) ++zero_roots;
    roots.assign(zero_roots, cd(0.0));
    const auto rest = coeffs.subspan(zero_roots);
    if (rest.size() <= 1) return roots;
    if (rest.size() == 2) {
        roots.emplace_back(-rest[0] / rest[1]);
        return roots;
    }
    std::vector<cd> found;
    if (!aberth(rest, found) || !residuals_ok(rest, found)) found = companion_roots(rest);
    roots.insert(roots.end(), found.begin(), found.end());
    return roots;
}

}  // namespace fracnl
