#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

#include "fracnl/errors.hpp"
#include "fracnl/newton_leipnik.hpp"
#include "fracnl/polynomial.hpp"
#include "fracnl/stability.hpp"

using namespace fracnl;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix3 error_jacobian() {
    Matrix3 j;
    j << -0.4, 1, 0, -1, -0.4, 0, 0, 0, -0.4;
    return j;
}

// Mode operator of the linear error system, diagonalised numerically.
std::array<Complex, 3> brute_mode_eigs(const SystemParams& p, double lambda) {
    Matrix3 m;
    m << -p.a - p.d[0] * lambda, 1, 0, -1, -kDamping2 - p.d[1] * lambda, 0, 0, 0, -kDamping2 - p.d[2] * lambda;
    Eigen::EigenSolver<Matrix3> es(m);
    return {es.eigenvalues()[0], es.eigenvalues()[1], es.eigenvalues()[2]};
}

}  // namespace

TEST_CASE("principal_arg range") {
    CHECK(principal_arg({-1.0, 0.0}) == doctest::Approx(kPi));
    CHECK(principal_arg({-1.0, -0.0}) == doctest::Approx(kPi));
    CHECK(principal_arg({0.0, 0.0}) == 0.0);
    CHECK(principal_arg({0.0, -1.0}) == doctest::Approx(-kPi / 2));
}

TEST_CASE("matignon_margin examples") {
    SUBCASE("error-system Jacobian") {
        const auto r = matignon_margin(error_jacobian(), {0.9, 1.0, 1.3});
        CHECK(r.worst_arg == doctest::Approx(1.9513).epsilon(1e-4 / 1.9513));
        CHECK(std::abs(r.margin - 1.2422) <= 1e-4);
        CHECK(r.stable_at.at(1.0));
        CHECK_FALSE(r.stable_at.at(1.3));
    }
    SUBCASE("negative identity") {
        CHECK(matignon_margin(-Matrix3::Identity()).margin == doctest::Approx(2.0));
    }
    SUBCASE("zero eigenvalue") {
        Matrix3 j = -Matrix3::Identity();
        j(2, 2) = 0.0;
        const auto r = matignon_margin(j);
        CHECK(r.margin == 0.0);
        CHECK_FALSE(r.stable_for(0.01));
    }
    SUBCASE("canonical equilibria") {
        const SystemParams p;
        const auto pts = equilibria(p).points;
        REQUIRE(pts.size() == 5);
        CHECK(std::abs(matignon_margin(jacobian(p, pts[1].point)).margin - 0.93660) <= 1e-4);
        CHECK(std::abs(matignon_margin(jacobian(p, pts[2].point)).margin - 0.93660) <= 1e-4);
        CHECK(std::abs(matignon_margin(jacobian(p, pts[3].point)).margin - 0.9541) <= 5e-4);
        CHECK(std::abs(matignon_margin(jacobian(p, pts[4].point)).margin - 0.9541) <= 5e-4);
        // The origin is a saddle: positive real eigenvalue alpha.
        CHECK(matignon_margin(jacobian(p, pts[0].point)).margin == 0.0);
    }
}

TEST_CASE("matignon_margin property: invariant under positive scaling") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-2.0, 2.0), c(0.01, 50.0);
    for (int k = 0; k < 200; ++k) {
        const Matrix3 j = Matrix3::NullaryExpr([&] { return u(rng); });
        const double s = c(rng);
        const auto a = matignon_margin(j), b = matignon_margin(s * j);
        CHECK(a.margin == doctest::Approx(b.margin).epsilon(1e-9));
        CHECK(a.margin >= 0.0);
        CHECK(a.margin <= 2.0);
        CHECK(a.margin == doctest::Approx(2.0 / kPi * a.worst_arg).epsilon(1e-15));
    }
}

TEST_CASE("rationalize") {
    CHECK(rationalize(0.85) == Rational(17, 20));
    CHECK(rationalize(0.975) == Rational(39, 40));
    CHECK(rationalize(1.0) == Rational(1, 1));
    CHECK(rationalize(0.5) == Rational(1, 2));
    const Rational pi_ish = rationalize(kPi / 4, 100);
    CHECK(pi_ish.den <= 100);
    CHECK(std::abs(pi_ish.value() - kPi / 4) < 1e-3);
    CHECK(Rational(6, 8) == Rational(3, 4));
    CHECK_THROWS_AS(Rational(1, 0), DomainError);
}

TEST_CASE("polynomial arithmetic and roots") {
    const Polynomial p({-6.0, 11.0, -6.0, 1.0});  // (x-1)(x-2)(x-3)
    CHECK(p.degree() == 3);
    auto roots = polynomial_roots(p);
    REQUIRE(roots.size() == 3);
    std::sort(roots.begin(), roots.end(), [](auto a, auto b) { return a.real() < b.real(); });
    for (int k = 0; k < 3; ++k) CHECK(std::abs(roots[k] - Complex(k + 1.0, 0.0)) < 1e-10);

    const Polynomial q = Polynomial::monomial(2) + Polynomial::constant(1.0);
    CHECK(std::abs(q(Complex(0, 1))) < 1e-15);
    const Polynomial prod = p * q;
    CHECK(prod.degree() == 5);
    CHECK(std::abs(prod(Complex(2.0, 0.0))) < 1e-12);
    CHECK((p - p).degree() <= 0);
    // Zero roots are recovered.
    CHECK(polynomial_roots(Polynomial::monomial(4) - Polynomial::monomial(2)).size() == 4);
}

TEST_CASE("deng_stable reduces to matignon for commensurate orders") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    int checked = 0;
    for (int trial = 0; checked < 50 && trial < 1000; ++trial) {
        const Matrix3 j = Matrix3::NullaryExpr([&] { return u(rng); });
        for (const Rational d : {Rational(9, 10), Rational(1, 2), Rational(3, 4)}) {
            const auto m = matignon_margin(j);
            if (std::abs(m.margin - d.value()) < 1e-3) continue;  // too close to call
            const auto r = deng_stable(j, {d, d, d});
            CHECK(r.stable == m.stable_for(d.value()));
            CHECK(r.max_residual_ratio <= 1.0);
        }
        ++checked;
    }
    CHECK(checked == 50);
}

TEST_CASE("deng_stable canonical verdicts") {
    const SystemParams p;
    const auto pts = equilibria(p).points;
    REQUIRE(pts.size() == 5);
    const std::array<Rational, 3> stable_orders{rationalize(0.85), rationalize(0.9), rationalize(0.8)};
    const std::array<Rational, 3> unstable_orders{rationalize(1.0), rationalize(0.95), rationalize(0.975)};
    for (std::size_t k = 1; k < 5; ++k) {
        const auto r = deng_stable(jacobian(p, pts[k].point), stable_orders);
        CHECK(r.stable);
        CHECK(r.lcm == 20);
        CHECK(r.degree == 51);
        CHECK(r.roots.size() == 51);
        CHECK(r.threshold == doctest::Approx(kPi / 40));
        CHECK(r.max_residual_ratio <= 1.0);
        for (std::size_t i = 1; i < r.roots.size(); ++i)
            CHECK(std::abs(principal_arg(r.roots[i - 1])) <= std::abs(principal_arg(r.roots[i])));
    }
    for (std::size_t k = 0; k < 5; ++k) {
        const auto r = deng_stable(jacobian(p, pts[k].point), unstable_orders);
        CHECK_FALSE(r.stable);
        CHECK(r.lcm == 40);
        CHECK(r.max_residual_ratio <= 1.0);
    }
}

TEST_CASE("deng_stable refuses oversized denominators") {
    const Rational a(1, 997), b(1, 991);
    CHECK_THROWS_AS(deng_stable(error_jacobian(), {a, b, Rational(1, 1)}), DomainError);
}

TEST_CASE("neumann_spectrum") {
    const auto s = neumann_spectrum(20.0, 10);
    REQUIRE(s.size() == 11);
    CHECK(s[0] == 0.0);
    CHECK(s[1] == doctest::Approx(0.024674).epsilon(1e-5));
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] > s[i - 1]);
    CHECK_THROWS_AS(neumann_spectrum(0.0, 3), DomainError);
    CHECK_THROWS_AS(neumann_spectrum(1.0, 0), DomainError);
}

TEST_CASE("sync_mode_eigen closed forms") {
    const SystemParams p;
    const auto zero = sync_mode_eigen(p, 0.0);
    CHECK(std::abs(zero.xi[0] - Complex(-0.4, 1.0)) < 1e-15);
    CHECK(std::abs(zero.xi[1] - Complex(-0.4, -1.0)) < 1e-15);
    CHECK(zero.xi[2] == Complex(-0.4, 0.0));
    const auto m = sync_mode_eigen(p, 2.5);
    CHECK(std::abs(m.xi[0] - Complex(-0.1 * 2.5 - 0.4, 1.0)) < 1e-14);
    CHECK(m.complex_branch);
}

TEST_CASE("sync_mode_eigen property: trace identity, stable xi3, agreement with the mode matrix") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> d(0.0, 3.0), lam(0.0, 40.0);
    for (int k = 0; k < 500; ++k) {
        const SystemParams p{0.4, 0.175, {d(rng), d(rng), d(rng)}};
        const double l = lam(rng);
        const auto e = sync_mode_eigen(p, l);
        CHECK(e.xi[2].imag() == 0.0);
        CHECK(e.xi[2].real() < 0.0);
        CHECK(e.xi[0].real() + e.xi[1].real() == doctest::Approx(-(p.d[0] + p.d[1]) * l - 0.8).epsilon(1e-12));
        CHECK(e.xi[0].real() < 0.0);
        CHECK(e.xi[1].real() < 0.0);
        const auto brute = brute_mode_eigs(p, l);
        for (const auto& x : e.xi) {
            double best = 1e300;
            for (const auto& b : brute) best = std::min(best, std::abs(x - b));
            CHECK(best <= 1e-8 * (1.0 + std::abs(x)));
        }
    }
}

TEST_CASE("sync_condition_check with equal diffusivities") {
    const SystemParams p;
    for (double delta : {0.1, 0.5, 0.9, 0.99, 1.0}) {
        const auto r = sync_condition_check(p, FractionalOrder(delta), 20.0, 200);
        CHECK(r.satisfied);
        CHECK(r.equal_diffusivity);
        CHECK_FALSE(r.truncated);
        CHECK(r.modes.size() == 201);
        CHECK_FALSE(r.note.empty());
        const auto lambdas = neumann_spectrum(20.0, 200);
        for (std::size_t i = 0; i < r.modes.size(); ++i) {
            const auto b = brute_mode_eigs(p, lambdas[i]);
            double brute_arg = 1e300;
            for (const auto& x : b)
                if (x.imag() != 0.0) brute_arg = std::min(brute_arg, std::abs(std::arg(x)));
            CHECK(std::abs(r.modes[i].arg - brute_arg) <= 1e-12);
        }
    }
}

TEST_CASE("sync_condition_check with unequal diffusivities enumerates complex-branch modes") {
    // d1 - d2 = 1: complex branch while lambda < 2.
    const SystemParams p{0.4, 0.175, {1.2, 0.2, 0.1}};
    const auto r = sync_condition_check(p, FractionalOrder(0.95), 20.0, 200);
    CHECK_FALSE(r.equal_diffusivity);
    CHECK_FALSE(r.truncated);
    bool brute_ok = true;
    for (const auto& m : r.modes) {
        CHECK(m.constrained == (m.eigen.lambda_i < 2.0));
        if (m.constrained) brute_ok = brute_ok && std::abs(m.arg) > 0.95 * kPi / 2;
    }
    CHECK(r.satisfied == brute_ok);

    const auto short_r = sync_condition_check(p, FractionalOrder(0.95), 20.0, 3);
    CHECK(short_r.truncated);
}
