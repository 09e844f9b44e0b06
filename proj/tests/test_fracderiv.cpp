#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "errors.hpp"
#include "expr.hpp"
#include "fracseries.hpp"

using namespace fracroot;

namespace {

FracSeries expand1(const std::string& src, int n_trunc) {
    const ExprPtr e = parse_expression(src, 1);
    const ComplexVec at{{0.0, 0.0}};
    return expand(*e, 0, at, n_trunc);
}

bool term_is(const SeriesTerm& t, double coeff, double mu, double tol = 1e-15) {
    return std::abs(t.coeff - Complex(coeff, 0.0)) <= tol && t.exponent == mu;
}

}  // namespace

TEST_CASE("expand: polynomials are exact, any truncation") {
    for (int n_trunc : {1, 4, 40}) {
        const FracSeries s = expand1("x^2 - 1", n_trunc);
        REQUIRE(s.terms.size() == 2);
        CHECK(term_is(s.terms[0], -1.0, 0.0));
        CHECK(term_is(s.terms[1], 1.0, 2.0));
    }
}

TEST_CASE("expand: sin plus a monomial division") {
    const FracSeries s = expand1("sin(x) - 3/(2*x)", 4);
    REQUIRE(s.terms.size() == 5);
    CHECK(term_is(s.terms[0], -1.5, -1.0));
    CHECK(term_is(s.terms[1], 1.0, 1.0));
    CHECK(term_is(s.terms[2], -1.0 / 6.0, 3.0));
    CHECK(term_is(s.terms[3], 1.0 / 120.0, 5.0));
    CHECK(term_is(s.terms[4], -1.0 / 5040.0, 7.0));
}

TEST_CASE("expand: exp(2x) - e keeps the constant plus n_trunc terms") {
    const FracSeries s = expand1("exp(2*x) - e", 3);
    REQUIRE(s.terms.size() == 4);
    CHECK(term_is(s.terms[0], 1.0 - 2.71828182845904523536, 0.0, 1e-15));
    CHECK(term_is(s.terms[1], 2.0, 1.0));
    CHECK(term_is(s.terms[2], 2.0, 2.0));
    CHECK(term_is(s.terms[3], 4.0 / 3.0, 3.0, 1e-15));
}

TEST_CASE("expand: frozen variables feed the coefficients") {
    // sin(x1*x2) as a function of x1 with x2 frozen at 2:
    // sin(2 x1) = 2 x1 - (2 x1)^3/6 + ...
    const ExprPtr e = parse_expression("sin(x1*x2)", 2);
    const ComplexVec at{{0.5, 0.0}, {2.0, 0.0}};
    const FracSeries s = expand(*e, 0, at, 2);
    REQUIRE(s.terms.size() == 2);
    CHECK(term_is(s.terms[0], 2.0, 1.0));
    CHECK(term_is(s.terms[1], -8.0 / 6.0, 3.0, 1e-15));
    // and as a function of x2 with x1 frozen it is sin(0.5 x2)
    const FracSeries t = expand(*e, 1, at, 1);
    REQUIRE(t.terms.size() == 1);
    CHECK(term_is(t.terms[0], 0.5, 1.0));
}

TEST_CASE("expand: constant argument collapses a call to one term") {
    const ExprPtr e = parse_expression("cos(x2^2) + x1", 2);
    const ComplexVec at{{1.0, 0.0}, {3.0, 0.0}};
    const FracSeries s = expand(*e, 0, at, 10);
    REQUIRE(s.terms.size() == 2);
    CHECK(std::abs(s.terms[0].coeff - Complex(std::cos(9.0), 0.0)) < 1e-15);
    CHECK(s.terms[0].exponent == 0.0);
    CHECK(term_is(s.terms[1], 1.0, 1.0));
}

TEST_CASE("expand rejections") {
    const ComplexVec at{{1.0, 0.0}, {1.0, 0.0}};
    // non-monomial denominator
    const ExprPtr bad_div = parse_expression("x1/(x1 + 1)", 2);
    CHECK_THROWS_AS(expand(*bad_div, 0, at, 8), UnsupportedExpr);
    // call argument nonlinear in the expansion variable
    const ExprPtr bad_call = parse_expression("cos(x2^2)", 2);
    CHECK_THROWS_AS(expand(*bad_call, 1, at, 8), UnsupportedExpr);
    // but the same tree is fine in the other variable (argument is frozen)
    CHECK_NOTHROW(expand(*bad_call, 0, at, 8));
    // fractional power of a non-monomial
    const ExprPtr bad_pow = parse_expression("(x1 + 1)^0.5", 2);
    CHECK_THROWS_AS(expand(*bad_pow, 0, at, 8), UnsupportedExpr);
}

TEST_CASE("expansion reproduces the expression it came from") {
    // summing c_k x^mu_k at the expansion point must give back eval(f, x),
    // frozen coefficients included
    std::mt19937 rng(60200);
    std::uniform_real_distribution<double> coeff(-3.0, 3.0);
    std::uniform_real_distribution<double> point(0.4, 1.6);
    const std::vector<std::string> sources = {
        "x1^3*x2 - 2*x2^2 + x1/(3*x2)",
        "sin(x1*x2) + x2",
        "exp(x1) - cosh(x2)*x1^2",
        "x2/(2*x1) - x1^4",
    };
    for (const std::string& src : sources) {
        const ExprPtr e = parse_expression(src, 2);
        for (int trial = 0; trial < 25; ++trial) {
            const ComplexVec x{{point(rng), 0.0}, {point(rng), 0.0}};
            for (int var = 0; var < 2; ++var) {
                const FracSeries s = expand(*e, var, x, 60);
                Complex sum(0.0, 0.0);
                for (const SeriesTerm& t : s.terms)
                    sum += t.coeff * principal_pow(x[static_cast<std::size_t>(var)], t.exponent);
                const Complex direct = eval(*e, x);
                CAPTURE(src);
                CHECK(std::abs(sum - direct) <= 1e-10 * std::max(1.0, std::abs(direct)));
            }
        }
    }
}

TEST_CASE("rl_term closed forms") {
    // mpmath oracle: Gamma(2)/Gamma(1.5) = 1.1283791670955125739
    const Complex a = rl_term({1, 0}, 1.0, 0.5, {1.0, 0.0});
    CHECK(std::abs(a - Complex(1.1283791670955125739, 0.0)) < 1e-13);

    // constant's half-derivative at x=4: 4^-0.5 / Gamma(0.5)
    const Complex b = rl_term({1, 0}, 0.0, 0.5, {4.0, 0.0});
    CHECK(std::abs(b - Complex(0.28209479177387814347, 0.0)) < 1e-13);

    // mu = -1 branch: (-1)^0.5 Gamma(0.5)/Gamma(1) = i sqrt(pi)
    const Complex c = rl_term({1, 0}, -1.0, 0.5, {1.0, 0.0});
    CHECK(std::abs(c - Complex(0.0, 1.7724538509055160273)) < 1e-13);

    // mu = 2: Gamma(3)/Gamma(2.5) = 1.5045055561273500985
    const Complex d = rl_term({1, 0}, 2.0, 0.5, {1.0, 0.0});
    CHECK(std::abs(d - Complex(1.5045055561273500985, 0.0)) < 1e-13);
}

TEST_CASE("rl_term pole conventions") {
    // denominator pole contributes zero: alpha = 0.5, mu = -0.5
    CHECK(rl_term({1, 0}, -0.5, 0.5, {2.0, 0.0}) == Complex(0.0, 0.0));
    // numerator pole in the mu <= -1 branch is a real error
    CHECK_THROWS_AS(rl_term({1, 0}, -1.5, 1.5, {1.0, 0.0}), PoleError);
    // x = 0 is outside the domain
    CHECK_THROWS_AS(rl_term({1, 0}, 1.0, 0.5, {0.0, 0.0}), DomainError);
    // integer orders are excluded
    CHECK_THROWS_AS(rl_term({1, 0}, 1.0, 1.0, {1.0, 0.0}), PreconditionError);
    CHECK_THROWS_AS(rl_term({1, 0}, 1.0, 0.0, {1.0, 0.0}), PreconditionError);
    CHECK_THROWS_AS(rl_term({1, 0}, 1.0, 2.5, {1.0, 0.0}), PreconditionError);
}

TEST_CASE("rl_term at negative real x stays real for the 1/x term") {
    // the principal (-1)^alpha factor cancels the phase of x^(mu-alpha)
    // exactly when mu = -1, so D^alpha of c/x is real on the negative axis
    const Complex v = rl_term({1, 0}, -1.0, 0.5, {-2.0, 0.0});
    CHECK(std::abs(v.imag()) < 1e-15 * std::abs(v));
}

TEST_CASE("caputo_term") {
    // constants die
    CHECK(caputo_term({5, 0}, 0.0, 0.5, {2.0, 0.0}) == Complex(0.0, 0.0));
    // equals RL when f(0) = 0
    const Complex a = caputo_term({1, 0}, 1.0, 0.5, {1.0, 0.0});
    CHECK(std::abs(a - Complex(1.1283791670955125739, 0.0)) < 1e-13);
    // alpha < 0 reduces to the RL integral
    const Complex b = caputo_term({1, 0}, 2.0, -0.5, {1.0, 0.0});
    CHECK(b == rl_term({1, 0}, 2.0, -0.5, {1.0, 0.0}));
    // alpha in (1,2): degree-1 content dies too
    CHECK(caputo_term({3, 0}, 1.0, 1.5, {2.0, 0.0}) == Complex(0.0, 0.0));
    // non-integer mu below n-1 has no Caputo form
    CHECK_THROWS_AS(caputo_term({1, 0}, -0.5, 0.5, {1.0, 0.0}), UnsupportedExponent);
}

TEST_CASE("frac_deriv_series sums the term rule") {
    FracSeries s;
    s.terms = {{{-1.0, 0.0}, 0.0}, {{1.0, 0.0}, 2.0}};
    // mpmath: Gamma(3)/Gamma(2.5) - 1/Gamma(0.5) = 0.94031597257959381158
    const Complex v = frac_deriv_series(s, 0.5, {1.0, 0.0}, DerivKind::RiemannLiouville);
    CHECK(std::abs(v - Complex(0.94031597257959381158, 0.0)) < 1e-13);

    // continuity toward the classic derivative of x^2 at 3
    FracSeries m;
    m.terms = {{{1.0, 0.0}, 2.0}};
    const Complex w = frac_deriv_series(m, 0.999999, {3.0, 0.0}, DerivKind::RiemannLiouville);
    CHECK(std::abs(w - Complex(6.0, 0.0)) < 1e-4);

    const FracSeries empty;
    CHECK(frac_deriv_series(empty, 0.5, {1.0, 0.0}, DerivKind::RiemannLiouville) ==
          Complex(0.0, 0.0));
}

TEST_CASE("frac_deriv_series linearity is exact") {
    std::mt19937 rng(31337);
    std::uniform_real_distribution<double> c(-4.0, 4.0);
    for (int trial = 0; trial < 50; ++trial) {
        FracSeries a, b, merged;
        for (int i = 0; i < 4; ++i) {
            a.terms.push_back({{c(rng), 0.0}, static_cast<double>(i)});
            b.terms.push_back({{c(rng), 0.0}, static_cast<double>(i) + 4.0});
        }
        merged.terms = a.terms;
        merged.terms.insert(merged.terms.end(), b.terms.begin(), b.terms.end());
        const Complex x(1.0 + std::abs(c(rng)), 0.0);
        const double alpha = 0.37;
        const Complex lhs = frac_deriv_series(merged, alpha, x, DerivKind::RiemannLiouville);
        const Complex rhs = frac_deriv_series(a, alpha, x, DerivKind::RiemannLiouville) +
                            frac_deriv_series(b, alpha, x, DerivKind::RiemannLiouville);
        // identical per-term values; only the summation grouping differs
        CHECK(std::abs(lhs - rhs) <= 1e-13 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("semigroup of fractional integrals on monomials") {
    // I^a I^b x^mu = I^(a+b) x^mu for negative orders
    std::mt19937 rng(555);
    std::uniform_real_distribution<double> ord(-0.95, -0.05);
    for (double x0 : {0.5, 1.0, 2.0}) {
        for (int mu = 0; mu <= 3; ++mu) {
            for (int trial = 0; trial < 40; ++trial) {
                const double a = ord(rng), b = ord(rng);
                // first integral of x^mu is a single power again
                const double inner_mu = mu - a;
                const Complex inner =
                    rl_term({1, 0}, static_cast<double>(mu), a, {x0, 0.0});
                const Complex coeff = inner / principal_pow({x0, 0.0}, inner_mu);
                const Complex two_step = rl_term(coeff, inner_mu, b, {x0, 0.0});
                const Complex one_step =
                    rl_term({1, 0}, static_cast<double>(mu), a + b, {x0, 0.0});
                CHECK(std::abs(two_step - one_step) <= 1e-10 * std::abs(one_step));
            }
        }
    }
}

TEST_CASE("derivative after integral restores the term") {
    std::mt19937 rng(808);
    std::uniform_real_distribution<double> ord(0.05, 0.95);
    std::uniform_real_distribution<double> expo(-0.9, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double alpha = ord(rng);
        const double mu = expo(rng);
        const Complex x(0.5 + 1.5 * ord(rng), 0.0);
        const Complex integrated = rl_term({1, 0}, mu, -alpha, x);
        const Complex coeff = integrated / principal_pow(x, mu + alpha);
        const Complex restored = rl_term(coeff, mu + alpha, alpha, x);
        const Complex original = principal_pow(x, mu);
        CHECK(std::abs(restored - original) <= 1e-10 * std::abs(original));
    }
}

TEST_CASE("frac_jacobian scalar value and delegation") {
    const SystemF f1 = parse_system(std::vector<std::string>{"x^2 - 1"}, 1);
    const ComplexMatrix j1 =
        frac_jacobian(f1, 0.5, ComplexVec{{1.0, 0.0}}, DerivKind::RiemannLiouville, 40);
    CHECK(std::abs(j1(0, 0) - Complex(0.94031597257959381158, 0.0)) < 1e-13);

    const SystemF f2 =
        parse_system(std::vector<std::string>{"x1^2 + x2^3 - 10", "x1^3 - x2^2 - 1"}, 2);
    const ComplexMatrix j2 =
        frac_jacobian(f2, 1.0, ComplexVec{{1, 0}, {1, 0}}, DerivKind::RiemannLiouville, 40);
    const ComplexMatrix jc = classic_jacobian(f2, ComplexVec{{1, 0}, {1, 0}});
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) CHECK(j2(k, l) == jc(k, l));

    const ComplexMatrix j3 =
        frac_jacobian(f1, 1.0 - 1e-6, ComplexVec{{2.0, 0.0}}, DerivKind::RiemannLiouville, 40);
    CHECK(std::abs(j3(0, 0) - Complex(4.0, 0.0)) < 1e-4);
}

TEST_CASE("frac_jacobian rejects zero components away from order 1") {
    const SystemF f = parse_system(std::vector<std::string>{"x1 + x2", "x1 - x2"}, 2);
    CHECK_THROWS_AS(
        frac_jacobian(f, 0.5, ComplexVec{{0, 0}, {1, 0}}, DerivKind::RiemannLiouville, 40),
        SingularPointError);
    CHECK_NOTHROW(
        frac_jacobian(f, 1.0, ComplexVec{{0, 0}, {1, 0}}, DerivKind::RiemannLiouville, 40));
}

TEST_CASE("continuity of the fractional Jacobian at order 1") {
    std::mt19937 rng(20260810);
    std::uniform_real_distribution<double> coeff(-3.0, 3.0);
    std::uniform_real_distribution<double> point(0.5, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        SystemF f;
        f.n = n;
        for (int k = 0; k < n; ++k) {
            ExprPtr e = make_const({coeff(rng), 0.0});
            for (int t = 0; t < 3; ++t) {
                const int v = static_cast<int>(rng() % n);
                const double p = static_cast<double>(1 + rng() % 4);
                e = make_add(e, make_mul(make_const({coeff(rng), 0.0}), make_pow(make_var(v), p)));
            }
            f.components.push_back(e);
        }
        ComplexVec x(static_cast<std::size_t>(n));
        for (auto& c : x) c = Complex(point(rng) * (rng() % 2 ? 1.0 : -1.0), 0.0);
        const ComplexMatrix jc = classic_jacobian(f, x);
        for (const double alpha : {1.0 - 1e-6, 1.0 + 1e-6}) {
            const ComplexMatrix jf = frac_jacobian(f, alpha, x, DerivKind::RiemannLiouville, 40);
            double worst = 0.0;
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    worst = std::max(worst, std::abs(jf(k, l) - jc(k, l)));
            CHECK(worst <= 1e-3);
        }
    }
}
