#pragma once

#include <complex>
#include <vector>

namespace fracroot {

using Complex = std::complex<double>;
using ComplexVec = std::vector<Complex>;

/// Gamma function on real and complex arguments (Lanczos approximation,
/// reflection formula for Re z < 0.5). Relative error stays below 1e-12 on
/// the real axis in [-170, 170] away from the poles.
/// Throws PoleError at non-positive integers, OverflowError when the result
/// is not representable in double.
Complex gamma(Complex z);

/// 1/Gamma(z) for real z, with the analytic-continuation convention
/// 1/Gamma = 0 at non-positive integers instead of a pole error.
double inv_gamma_real(double z);

/// sin(pi*z) with exact integer reduction of the real part, so the result
/// keeps full relative accuracy for large |Re z|.
Complex sinpi(Complex z);

/// Principal-branch power base^exponent = exp(exponent * Log base) with
/// Arg in (-pi, pi]. Real positive bases return exactly real results.
/// Throws DomainError for 0 raised to a negative power.
Complex principal_pow(Complex base, double exponent);

/// True when z lies within tol of a non-positive integer.
bool near_nonpositive_integer(double z, double tol = 1e-12);

/// base^k by repeated multiplication. Keeps real inputs exactly real, which
/// principal_pow cannot promise for negative bases.
Complex integer_pow(Complex base, long long k);

}  // namespace fracroot
