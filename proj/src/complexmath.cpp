#include "complexmath.hpp"

#include <cmath>
#include <limits>

#include "errors.hpp"

namespace fracroot {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;

// Lanczos coefficients, g = 7, 9 terms (Godfrey's set).
constexpr double kLanczosG = 7.0;
constexpr double kLanczosP[] = {
    0.99999999999980993,     676.5203681218851,      -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,    12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6,  1.5056327351493116e-7,
};

// log Gamma for Re z >= 0.5, evaluated in log form so the reflection path
// can compose values whose intermediate Gamma would overflow.
Complex log_gamma_core(Complex z) {
    z -= 1.0;
    Complex acc = kLanczosP[0];
    for (int i = 1; i < 9; ++i) acc += kLanczosP[i] / (z + static_cast<double>(i));
    const Complex t = z + kLanczosG + 0.5;
    return kLogSqrt2Pi + (z + 0.5) * std::log(t) - t + std::log(acc);
}

}  // namespace

bool near_nonpositive_integer(double z, double tol) {
    if (z > 0.5) return false;
    return std::abs(z - std::round(z)) <= tol;
}

Complex sinpi(Complex z) {
    const double n = std::floor(z.real());
    const Complex r = z - n;
    Complex v = std::sin(kPi * r);
    // sin(pi(n+r)) = (-1)^n sin(pi r)
    if (std::fmod(n, 2.0) != 0.0) v = -v;
    return v;
}

Complex gamma(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("gamma needs finite arguments");
    if (z.imag() == 0.0 && near_nonpositive_integer(z.real()))
        throw PoleError("gamma pole at non-positive integer");
    Complex lg;
    if (z.real() < 0.5) {
        // Gamma(z) Gamma(1-z) = pi / sin(pi z), composed in log space
        lg = std::log(Complex(kPi, 0.0)) - std::log(sinpi(z)) - log_gamma_core(1.0 - z);
    } else {
        lg = log_gamma_core(z);
    }
    if (lg.real() > 709.7) throw OverflowError("gamma overflow");
    return std::exp(lg);
}

double inv_gamma_real(double z) {
    if (near_nonpositive_integer(z)) return 0.0;
    if (z >= 0.5) {
        // 1/Gamma decays fast for large z; underflow to 0 is the right limit
        const double lg = log_gamma_core(Complex(z, 0.0)).real();
        return std::exp(-lg);
    }
    // reflection: 1/Gamma(z) = Gamma(1-z) sin(pi z) / pi
    const Complex lg = log_gamma_core(Complex(1.0 - z, 0.0));
    return std::exp(lg.real()) * sinpi(Complex(z, 0.0)).real() / kPi;
}

Complex integer_pow(Complex base, long long k) {
    if (k < 0) {
        if (base == Complex(0.0, 0.0)) throw DomainError("0 raised to a negative power");
        return Complex(1.0, 0.0) / integer_pow(base, -k);
    }
    Complex r(1.0, 0.0);
    Complex b = base;
    while (k > 0) {
        if (k & 1) r *= b;
        b *= b;
        k >>= 1;
    }
    return r;
}

Complex principal_pow(Complex base, double exponent) {
    if (!std::isfinite(base.real()) || !std::isfinite(base.imag()) || !std::isfinite(exponent))
        throw DomainError("principal_pow needs finite arguments");
    if (base == Complex(0.0, 0.0)) {
        if (exponent > 0.0) return {0.0, 0.0};
        if (exponent == 0.0) return {1.0, 0.0};
        throw DomainError("0 raised to a negative power");
    }
    if (base.imag() == 0.0 && base.real() > 0.0)
        return {std::pow(base.real(), exponent), 0.0};
    return std::exp(exponent * std::log(base));
}

}  // namespace fracroot
