#pragma once

#include <span>
#include <vector>

#include "complexmath.hpp"
#include "expr.hpp"
#include "linalg.hpp"

namespace fracroot {

enum class DerivKind { RiemannLiouville, Caputo };

struct SeriesTerm {
    Complex coeff;
    double exponent;  // mu
};

/// Finite fractional power series sum c_k x^{mu_k}, lower limit 0.
/// Exponents strictly increasing, duplicate exponents merged, zero
/// coefficients dropped.
struct FracSeries {
    std::vector<SeriesTerm> terms;
};

/// Expand e as a univariate function of x_var, the other variables frozen at
/// `at`. Polynomial content expands exactly; sin/cos/exp/sinh/cosh of
/// arguments linear in x_var expand into their first n_trunc non-constant
/// Taylor terms (plus the constant term when nonzero). Division is only
/// possible by monomials in x_var.
/// Throws UnsupportedExpr when no fractional-power-series form exists.
FracSeries expand(const Expr& e, int var, std::span<const Complex> at, int n_trunc);

/// Riemann-Liouville derivative/integral of order alpha of coeff*x^mu,
/// lower limit 0:
///   mu > -1 : coeff * Gamma(mu+1)/Gamma(mu-alpha+1) * x^(mu-alpha)
///   mu <= -1: coeff * (-1)^alpha * Gamma(-(mu+alpha))/Gamma(-mu) * x^(mu-alpha)
/// with (-1)^alpha on the principal branch and 1/Gamma = 0 at denominator
/// poles. Negative alpha gives the fractional integral of the same form.
Complex rl_term(Complex coeff, double mu, double alpha, Complex x);

/// Caputo counterpart: identical to rl_term for alpha < 0; for alpha > 0 it
/// annihilates integer exponents mu <= n-1 (n = floor(alpha)+1) and matches
/// the Gamma-ratio rule above otherwise. Non-integer mu <= n-1 is not
/// representable in the Caputo form and raises UnsupportedExponent.
Complex caputo_term(Complex coeff, double mu, double alpha, Complex x);

Complex frac_term(Complex coeff, double mu, double alpha, Complex x, DerivKind kind);

/// Termwise derivative of a whole series (exact linearity).
Complex frac_deriv_series(const FracSeries& s, double alpha, Complex x, DerivKind kind);

/// Fractional Jacobian M_kj = D^alpha_{x_j} f_k evaluated at x. At alpha = 1
/// this is exactly the classic Jacobian. Throws SingularPointError when some
/// x_j = 0 and alpha != 1.
ComplexMatrix frac_jacobian(const SystemF& f, double alpha, std::span<const Complex> x,
                            DerivKind kind, int n_trunc);

}  // namespace fracroot
