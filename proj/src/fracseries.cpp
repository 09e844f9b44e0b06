#include "fracseries.hpp"

#include <cmath>
#include <map>
#include <string>

#include "errors.hpp"

namespace fracroot {

namespace {

constexpr std::size_t kMaxSeriesTerms = 20000;  // guard against runaway products

bool near_integer(double v, double tol = 1e-12) {
    return std::abs(v - std::round(v)) <= tol;
}

void check_alpha(double alpha) {
    if (!(alpha > -2.0 && alpha < 2.0) || alpha == -1.0 || alpha == 0.0 || alpha == 1.0)
        throw PreconditionError("derivative order must lie in (-2,2) excluding {-1,0,1}");
}

// working representation during expansion: exponent -> coefficient
using TermMap = std::map<double, Complex>;

void add_term(TermMap& m, double mu, Complex c) {
    if (c == Complex(0.0, 0.0)) return;
    auto [it, inserted] = m.try_emplace(mu, c);
    if (!inserted) {
        it->second += c;
        if (it->second == Complex(0.0, 0.0)) m.erase(it);
    }
    if (m.size() > kMaxSeriesTerms) throw UnsupportedExpr("expansion exceeds the term budget");
}

TermMap mul_series(const TermMap& a, const TermMap& b) {
    TermMap out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) add_term(out, ma + mb, ca * cb);
    return out;
}

bool is_monomial(const TermMap& m) { return m.size() == 1; }

// f, f', f'', ... cycles for the five supported calls, evaluated at b
Complex call_derivative(FuncKind f, int order, Complex b) {
    switch (f) {
        case FuncKind::Exp: return std::exp(b);
        case FuncKind::Sin:
            switch (order % 4) {
                case 0: return std::sin(b);
                case 1: return std::cos(b);
                case 2: return -std::sin(b);
                default: return -std::cos(b);
            }
        case FuncKind::Cos:
            switch (order % 4) {
                case 0: return std::cos(b);
                case 1: return -std::sin(b);
                case 2: return -std::cos(b);
                default: return std::sin(b);
            }
        case FuncKind::Sinh: return (order % 2 == 0) ? std::sinh(b) : std::cosh(b);
        case FuncKind::Cosh: return (order % 2 == 0) ? std::cosh(b) : std::sinh(b);
    }
    throw Error("corrupt expression tree");
}

TermMap expand_impl(const Expr& e, int var, std::span<const Complex> at, int n_trunc) {
    TermMap out;
    switch (e.kind) {
        case Expr::Kind::Const:
            add_term(out, 0.0, e.value);
            return out;
        case Expr::Kind::Var:
            if (e.var == var)
                add_term(out, 1.0, Complex(1.0, 0.0));
            else
                add_term(out, 0.0, at[static_cast<std::size_t>(e.var)]);
            return out;
        case Expr::Kind::Add: {
            out = expand_impl(*e.lhs, var, at, n_trunc);
            for (const auto& [mu, c] : expand_impl(*e.rhs, var, at, n_trunc)) add_term(out, mu, c);
            return out;
        }
        case Expr::Kind::Sub: {
            out = expand_impl(*e.lhs, var, at, n_trunc);
            for (const auto& [mu, c] : expand_impl(*e.rhs, var, at, n_trunc)) add_term(out, mu, -c);
            return out;
        }
        case Expr::Kind::Neg: {
            for (const auto& [mu, c] : expand_impl(*e.lhs, var, at, n_trunc)) add_term(out, mu, -c);
            return out;
        }
        case Expr::Kind::Mul:
            return mul_series(expand_impl(*e.lhs, var, at, n_trunc),
                              expand_impl(*e.rhs, var, at, n_trunc));
        case Expr::Kind::Div: {
            TermMap den = expand_impl(*e.rhs, var, at, n_trunc);
            if (den.empty()) throw DivByZero("division by zero in expansion", -1);
            if (!is_monomial(den))
                throw UnsupportedExpr("division by a non-monomial denominator");
            const auto& [mu, c] = *den.begin();
            TermMap num = expand_impl(*e.lhs, var, at, n_trunc);
            TermMap inv;
            add_term(inv, -mu, Complex(1.0, 0.0) / c);
            return mul_series(num, inv);
        }
        case Expr::Kind::Pow: {
            TermMap base = expand_impl(*e.lhs, var, at, n_trunc);
            const double p = e.exponent;
            if (std::abs(p) > 1e6) throw UnsupportedExpr("power exponent out of range");
            if (near_integer(p) && p >= 0.0) {
                long long k = static_cast<long long>(std::llround(p));
                TermMap acc;
                add_term(acc, 0.0, Complex(1.0, 0.0));
                for (; k > 0; --k) acc = mul_series(acc, base);
                return acc;
            }
            // negative or fractional exponents need a monomial base
            if (base.empty()) {
                if (p < 0.0) throw DivByZero("0 raised to a negative power in expansion", -1);
                return base;  // 0^p = 0 for p > 0
            }
            if (!is_monomial(base))
                throw UnsupportedExpr("non-integer power of a non-monomial expression");
            const auto& [mu, c] = *base.begin();
            add_term(out, mu * p,
                     near_integer(p) ? integer_pow(c, static_cast<long long>(std::llround(p)))
                                     : principal_pow(c, p));
            return out;
        }
        case Expr::Kind::Call: {
            TermMap arg = expand_impl(*e.lhs, var, at, n_trunc);
            Complex b(0.0, 0.0);
            Complex a(0.0, 0.0);
            for (const auto& [mu, c] : arg) {
                if (mu == 0.0)
                    b = c;
                else if (mu == 1.0)
                    a = c;
                else
                    throw UnsupportedExpr(
                        "call argument is not linear in the expansion variable");
            }
            if (a == Complex(0.0, 0.0)) {
                add_term(out, 0.0, call_derivative(e.func, 0, b));
                return out;
            }
            // f(b + a x) = sum_k f^(k)(b) a^k / k! x^k, keeping the constant
            // term plus the first n_trunc nonzero non-constant terms
            add_term(out, 0.0, call_derivative(e.func, 0, b));
            int kept = 0;
            double factorial = 1.0;
            Complex apow(1.0, 0.0);
            const int k_cap = 4 * n_trunc + 8;
            for (int k = 1; kept < n_trunc && k <= k_cap; ++k) {
                factorial *= k;
                apow *= a;
                const Complex coeff = call_derivative(e.func, k, b) * apow / factorial;
                if (coeff == Complex(0.0, 0.0)) continue;
                add_term(out, static_cast<double>(k), coeff);
                ++kept;
            }
            return out;
        }
    }
    throw Error("corrupt expression tree");
}

Complex gamma_ratio_rule(Complex coeff, double mu, double alpha, Complex x) {
    // Gamma(mu+1)/Gamma(mu-alpha+1) x^(mu-alpha), 1/Gamma = 0 at poles
    const double inv = inv_gamma_real(mu - alpha + 1.0);
    if (inv == 0.0) return {0.0, 0.0};
    const double num = gamma(Complex(mu + 1.0, 0.0)).real();
    return coeff * (num * inv) * principal_pow(x, mu - alpha);
}

}  // namespace

FracSeries expand(const Expr& e, int var, std::span<const Complex> at, int n_trunc) {
    if (n_trunc < 1) throw PreconditionError("n_trunc must be positive");
    TermMap m = expand_impl(e, var, at, n_trunc);
    FracSeries s;
    s.terms.reserve(m.size());
    for (const auto& [mu, c] : m) s.terms.push_back({c, mu});
    return s;
}

Complex rl_term(Complex coeff, double mu, double alpha, Complex x) {
    check_alpha(alpha);
    if (x == Complex(0.0, 0.0)) throw DomainError("fractional term rule undefined at x = 0");
    if (mu > -1.0) return gamma_ratio_rule(coeff, mu, alpha, x);
    // mu <= -1 branch carries the principal (-1)^alpha factor
    const double num_arg = -(mu + alpha);
    if (near_nonpositive_integer(num_arg))
        throw PoleError("Gamma(-(mu+alpha)) pole in the mu <= -1 branch");
    const Complex num = gamma(Complex(num_arg, 0.0));
    const Complex den = gamma(Complex(-mu, 0.0));
    return coeff * principal_pow(Complex(-1.0, 0.0), alpha) * (num / den) *
           principal_pow(x, mu - alpha);
}

Complex caputo_term(Complex coeff, double mu, double alpha, Complex x) {
    check_alpha(alpha);
    if (alpha < 0.0) return rl_term(coeff, mu, alpha, x);  // both reduce to the RL integral
    if (x == Complex(0.0, 0.0)) throw DomainError("fractional term rule undefined at x = 0");
    const int n = static_cast<int>(std::floor(alpha)) + 1;
    if (mu > static_cast<double>(n - 1)) return gamma_ratio_rule(coeff, mu, alpha, x);
    if (near_integer(mu) && mu >= -0.5) return {0.0, 0.0};  // d^n/dx^n kills degree < n
    throw UnsupportedExponent("Caputo rule needs integer mu or mu > n-1");
}

Complex frac_term(Complex coeff, double mu, double alpha, Complex x, DerivKind kind) {
    return kind == DerivKind::RiemannLiouville ? rl_term(coeff, mu, alpha, x)
                                               : caputo_term(coeff, mu, alpha, x);
}

Complex frac_deriv_series(const FracSeries& s, double alpha, Complex x, DerivKind kind) {
    Complex sum(0.0, 0.0);
    for (std::size_t i = 0; i < s.terms.size(); ++i) {
        try {
            sum += frac_term(s.terms[i].coeff, s.terms[i].exponent, alpha, x, kind);
        } catch (const PoleError& err) {
            throw PoleError("term " + std::to_string(i) + ": " + err.what());
        } catch (const DomainError& err) {
            throw DomainError("term " + std::to_string(i) + ": " + err.what());
        } catch (const UnsupportedExponent& err) {
            throw UnsupportedExponent("term " + std::to_string(i) + ": " + err.what());
        }
    }
    return sum;
}

ComplexMatrix frac_jacobian(const SystemF& f, double alpha, std::span<const Complex> x,
                            DerivKind kind, int n_trunc) {
    if (static_cast<int>(x.size()) != f.n)
        throw PreconditionError("frac_jacobian: dimension mismatch");
    if (alpha == 1.0) return classic_jacobian(f, x);
    ComplexMatrix m(f.n);
    for (int j = 0; j < f.n; ++j)
        if (x[static_cast<std::size_t>(j)] == Complex(0.0, 0.0))
            throw SingularPointError("component " + std::to_string(j + 1) +
                                     " is zero; fractional order needs x_j != 0");
    for (int k = 0; k < f.n; ++k) {
        for (int j = 0; j < f.n; ++j) {
            const FracSeries s = expand(*f.components[k], j, x, n_trunc);
            m(k, j) = frac_deriv_series(s, alpha, x[static_cast<std::size_t>(j)], kind);
        }
    }
    return m;
}

}  // namespace fracroot
