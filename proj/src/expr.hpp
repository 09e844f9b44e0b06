#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "complexmath.hpp"
#include "linalg.hpp"

namespace fracroot {

enum class FuncKind { Sin, Cos, Exp, Sinh, Cosh };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree. Pow keeps its exponent as a real literal so
/// the fractional term rules stay applicable; everything else is ordinary.
struct Expr {
    enum class Kind { Const, Var, Add, Sub, Mul, Div, Pow, Call, Neg };

    Kind kind;
    Complex value{};       // Const
    int var = 0;           // Var, 0-based
    double exponent = 0;   // Pow
    FuncKind func{};       // Call
    ExprPtr lhs, rhs;      // children; rhs empty for unary nodes
};

ExprPtr make_const(Complex v);
ExprPtr make_var(int index);
ExprPtr make_add(ExprPtr a, ExprPtr b);
ExprPtr make_sub(ExprPtr a, ExprPtr b);
ExprPtr make_mul(ExprPtr a, ExprPtr b);
ExprPtr make_div(ExprPtr a, ExprPtr b);
ExprPtr make_pow(ExprPtr base, double exponent);
ExprPtr make_call(FuncKind f, ExprPtr arg);
ExprPtr make_neg(ExprPtr a);

/// A system f: C^n -> C^n given as one expression per component.
struct SystemF {
    int n = 0;
    std::vector<ExprPtr> components;
};

/// Parse a single expression over variables x1..xn (plain `x` when n = 1),
/// constants pi and e, operators + - * / ^ and calls sin/cos/exp/sinh/cosh.
/// Throws SyntaxError (with position) or ArityError.
ExprPtr parse_expression(std::string_view source, int n);

/// Parse one source line per component.
SystemF parse_system(std::span<const std::string> sources, int n);

Complex eval(const Expr& e, std::span<const Complex> x);
ComplexVec eval(const SystemF& f, std::span<const Complex> x);

/// Exact symbolic partial derivative with respect to x_var (0-based).
ExprPtr differentiate(const ExprPtr& e, int var);

/// Matrix of symbolic partials evaluated at x: J_kj = d f_k / d x_j.
ComplexMatrix classic_jacobian(const SystemF& f, std::span<const Complex> x);

/// Derivative trees of a system, built once so iteration loops do not
/// re-differentiate on every call.
class JacobianCache {
  public:
    explicit JacobianCache(const SystemF& f);
    ComplexMatrix eval_at(std::span<const Complex> x) const;

  private:
    int n_;
    std::vector<ExprPtr> partials_;  // row major, n*n
};

std::string to_string(const Expr& e);

/// Structural equality (same shape, same literals).
bool equal(const ExprPtr& a, const ExprPtr& b);

/// True when the tree contains a sin/cos/exp/sinh/cosh call.
bool has_transcendental(const Expr& e);

}  // namespace fracroot
