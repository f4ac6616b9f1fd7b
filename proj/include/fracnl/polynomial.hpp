#pragma once

#include <complex>
#include <span>
#include <vector>

namespace fracnl {

/// Real polynomial with coefficients in ascending powers: c[0] + c[1] x + ...
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);

    static Polynomial monomial(std::size_t power, double coeff = 1.0);
    static Polynomial constant(double c) { return Polynomial({c}); }

    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    std::span<const double> coeffs() const noexcept { return c_; }

    std::complex<double> operator()(std::complex<double> x) const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(double s, const Polynomial& a);

private:
    void trim();
    std::vector<double> c_;
};

/// All complex roots, by Aberth-Ehrlich iteration with a companion-matrix fallback.
std::vector<std::complex<double>> polynomial_roots(const Polynomial& p);

}  // namespace fracnl
