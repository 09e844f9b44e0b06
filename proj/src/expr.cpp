#include "expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "errors.hpp"

namespace fracroot {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kE = 2.71828182845904523536028747135266250;

bool is_const(const ExprPtr& e, double v) {
    return e->kind == Expr::Kind::Const && e->value == Complex(v, 0.0);
}

bool integer_exponent(double p) {
    return p == std::floor(p) && std::abs(p) < 1e9;
}

}  // namespace

ExprPtr make_const(Complex v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Const;
    e->value = v;
    return e;
}

ExprPtr make_var(int index) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Var;
    e->var = index;
    return e;
}

ExprPtr make_add(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    if (a->kind == Expr::Kind::Const && b->kind == Expr::Kind::Const)
        return make_const(a->value + b->value);
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Add;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

ExprPtr make_sub(ExprPtr a, ExprPtr b) {
    if (is_const(b, 0.0)) return a;
    if (a->kind == Expr::Kind::Const && b->kind == Expr::Kind::Const)
        return make_const(a->value - b->value);
    if (is_const(a, 0.0)) return make_neg(std::move(b));
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Sub;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

ExprPtr make_mul(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(Complex(0.0, 0.0));
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    if (a->kind == Expr::Kind::Const && b->kind == Expr::Kind::Const)
        return make_const(a->value * b->value);
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Mul;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

ExprPtr make_div(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0.0)) return a;
    if (is_const(b, 1.0)) return a;
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Div;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

ExprPtr make_pow(ExprPtr base, double exponent) {
    if (exponent == 1.0) return base;
    if (exponent == 0.0) return make_const(Complex(1.0, 0.0));
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Pow;
    e->lhs = std::move(base);
    e->exponent = exponent;
    return e;
}

ExprPtr make_call(FuncKind f, ExprPtr arg) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Call;
    e->func = f;
    e->lhs = std::move(arg);
    return e;
}

ExprPtr make_neg(ExprPtr a) {
    if (a->kind == Expr::Kind::Const) return make_const(-a->value);
    if (a->kind == Expr::Kind::Neg) return a->lhs;
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Neg;
    e->lhs = std::move(a);
    return e;
}

// ---------------------------------------------------------------------------
// parser
// ---------------------------------------------------------------------------

namespace {

struct Parser {
    std::string_view src;
    std::size_t pos = 0;
    int n = 0;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c))
            throw SyntaxError(std::string("expected '") + c + "'", pos);
    }

    [[noreturn]] void fail(const std::string& what, std::size_t at) { throw SyntaxError(what, at); }

    double number() {
        skip_ws();
        const char* begin = src.data() + pos;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("expected a number", pos);
        pos += static_cast<std::size_t>(end - begin);
        return v;
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            ++pos;
        return std::string(src.substr(start, pos - start));
    }

    ExprPtr expression() {
        ExprPtr e = term();
        while (true) {
            if (accept('+'))
                e = make_add(e, term());
            else if (accept('-'))
                e = make_sub(e, term());
            else
                return e;
        }
    }

    ExprPtr term() {
        ExprPtr e = unary();
        while (true) {
            if (accept('*'))
                e = make_mul(e, unary());
            else if (accept('/'))
                e = make_div(e, unary());
            else
                return e;
        }
    }

    ExprPtr unary() {
        if (accept('-')) return make_neg(unary());
        if (accept('+')) return unary();
        return power();
    }

    ExprPtr power() {
        ExprPtr base = atom();
        if (accept('^')) return make_pow(base, exponent_literal());
        return base;
    }

    // exponents are real literals; a '^' chain folds right-associatively
    double exponent_literal() {
        skip_ws();
        double sign = 1.0;
        if (accept('-')) sign = -1.0;
        double v;
        if (accept('(')) {
            double inner_sign = 1.0;
            if (accept('-')) inner_sign = -1.0;
            v = inner_sign * number();
            expect(')');
        } else {
            v = number();
        }
        if (accept('^')) v = std::pow(v, exponent_literal());
        return sign * v;
    }

    ExprPtr atom() {
        skip_ws();
        if (pos >= src.size()) fail("unexpected end of input", pos);
        const char c = src[pos];
        if (c == '(') {
            ++pos;
            ExprPtr e = expression();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return make_const(Complex(number(), 0.0));
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t at = pos;
            const std::string name = ident();
            if (name == "pi") return make_const(Complex(kPi, 0.0));
            if (name == "e") return make_const(Complex(kE, 0.0));
            if (name == "sin" || name == "cos" || name == "exp" || name == "sinh" ||
                name == "cosh") {
                expect('(');
                ExprPtr arg = expression();
                expect(')');
                FuncKind f = FuncKind::Sin;
                if (name == "cos") f = FuncKind::Cos;
                else if (name == "exp") f = FuncKind::Exp;
                else if (name == "sinh") f = FuncKind::Sinh;
                else if (name == "cosh") f = FuncKind::Cosh;
                return make_call(f, arg);
            }
            if (name == "x") {
                if (n != 1) throw ArityError("plain 'x' is only valid for one-dimensional systems");
                return make_var(0);
            }
            if (name.size() > 1 && name[0] == 'x') {
                bool digits = true;
                for (std::size_t i = 1; i < name.size(); ++i)
                    if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
                if (digits) {
                    const int k = std::atoi(name.c_str() + 1);
                    if (k < 1 || k > n)
                        throw ArityError("variable " + name + " outside dimension " +
                                         std::to_string(n));
                    return make_var(k - 1);
                }
            }
            fail("unknown identifier '" + name + "'", at);
        }
        fail(std::string("unexpected character '") + c + "'", pos);
    }
};

}  // namespace

ExprPtr parse_expression(std::string_view source, int n) {
    if (n < 1) throw PreconditionError("dimension must be at least 1");
    Parser p{source, 0, n};
    ExprPtr e = p.expression();
    p.skip_ws();
    if (p.pos != source.size()) p.fail("trailing input", p.pos);
    return e;
}

SystemF parse_system(std::span<const std::string> sources, int n) {
    if (static_cast<int>(sources.size()) != n)
        throw PreconditionError("system needs exactly n component expressions");
    SystemF f;
    f.n = n;
    f.components.reserve(sources.size());
    for (const std::string& s : sources) f.components.push_back(parse_expression(s, n));
    return f;
}

// ---------------------------------------------------------------------------
// evaluation
// ---------------------------------------------------------------------------

Complex eval(const Expr& e, std::span<const Complex> x) {
    switch (e.kind) {
        case Expr::Kind::Const: return e.value;
        case Expr::Kind::Var: return x[static_cast<std::size_t>(e.var)];
        case Expr::Kind::Add: return eval(*e.lhs, x) + eval(*e.rhs, x);
        case Expr::Kind::Sub: return eval(*e.lhs, x) - eval(*e.rhs, x);
        case Expr::Kind::Mul: return eval(*e.lhs, x) * eval(*e.rhs, x);
        case Expr::Kind::Div: {
            const Complex num = eval(*e.lhs, x);
            const Complex den = eval(*e.rhs, x);
            if (den == Complex(0.0, 0.0)) throw DivByZero("division by zero", -1);
            return num / den;
        }
        case Expr::Kind::Pow: {
            const Complex base = eval(*e.lhs, x);
            if (integer_exponent(e.exponent)) {
                if (e.exponent < 0.0 && base == Complex(0.0, 0.0))
                    throw DivByZero("0 raised to a negative power", -1);
                return integer_pow(base, static_cast<long long>(e.exponent));
            }
            return principal_pow(base, e.exponent);
        }
        case Expr::Kind::Call: {
            const Complex a = eval(*e.lhs, x);
            switch (e.func) {
                case FuncKind::Sin: return std::sin(a);
                case FuncKind::Cos: return std::cos(a);
                case FuncKind::Exp: return std::exp(a);
                case FuncKind::Sinh: return std::sinh(a);
                case FuncKind::Cosh: return std::cosh(a);
            }
            break;
        }
        case Expr::Kind::Neg: return -eval(*e.lhs, x);
    }
    throw Error("corrupt expression tree");
}

ComplexVec eval(const SystemF& f, std::span<const Complex> x) {
    if (static_cast<int>(x.size()) != f.n) throw PreconditionError("eval: dimension mismatch");
    ComplexVec out;
    out.reserve(f.components.size());
    for (std::size_t k = 0; k < f.components.size(); ++k) {
        try {
            out.push_back(eval(*f.components[k], x));
        } catch (const DivByZero&) {
            throw DivByZero("division by zero", static_cast<int>(k));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// symbolic differentiation
// ---------------------------------------------------------------------------

ExprPtr differentiate(const ExprPtr& e, int var) {
    switch (e->kind) {
        case Expr::Kind::Const: return make_const(Complex(0.0, 0.0));
        case Expr::Kind::Var:
            return make_const(Complex(e->var == var ? 1.0 : 0.0, 0.0));
        case Expr::Kind::Add:
            return make_add(differentiate(e->lhs, var), differentiate(e->rhs, var));
        case Expr::Kind::Sub:
            return make_sub(differentiate(e->lhs, var), differentiate(e->rhs, var));
        case Expr::Kind::Mul:
            return make_add(make_mul(differentiate(e->lhs, var), e->rhs),
                            make_mul(e->lhs, differentiate(e->rhs, var)));
        case Expr::Kind::Div:
            // (u/v)' = u'/v - u v'/v^2
            return make_sub(
                make_div(differentiate(e->lhs, var), e->rhs),
                make_div(make_mul(e->lhs, differentiate(e->rhs, var)), make_pow(e->rhs, 2.0)));
        case Expr::Kind::Pow:
            return make_mul(
                make_mul(make_const(Complex(e->exponent, 0.0)), make_pow(e->lhs, e->exponent - 1)),
                differentiate(e->lhs, var));
        case Expr::Kind::Call: {
            ExprPtr inner = differentiate(e->lhs, var);
            ExprPtr outer;
            switch (e->func) {
                case FuncKind::Sin: outer = make_call(FuncKind::Cos, e->lhs); break;
                case FuncKind::Cos: outer = make_neg(make_call(FuncKind::Sin, e->lhs)); break;
                case FuncKind::Exp: outer = make_call(FuncKind::Exp, e->lhs); break;
                case FuncKind::Sinh: outer = make_call(FuncKind::Cosh, e->lhs); break;
                case FuncKind::Cosh: outer = make_call(FuncKind::Sinh, e->lhs); break;
            }
            return make_mul(outer, inner);
        }
        case Expr::Kind::Neg: return make_neg(differentiate(e->lhs, var));
    }
    throw Error("corrupt expression tree");
}

ComplexMatrix classic_jacobian(const SystemF& f, std::span<const Complex> x) {
    ComplexMatrix j(f.n);
    for (int k = 0; k < f.n; ++k)
        for (int l = 0; l < f.n; ++l) j(k, l) = eval(*differentiate(f.components[k], l), x);
    return j;
}

JacobianCache::JacobianCache(const SystemF& f) : n_(f.n) {
    partials_.reserve(static_cast<std::size_t>(n_) * n_);
    for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) partials_.push_back(differentiate(f.components[k], l));
}

ComplexMatrix JacobianCache::eval_at(std::span<const Complex> x) const {
    ComplexMatrix j(n_);
    for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l)
            j(k, l) = eval(*partials_[static_cast<std::size_t>(k) * n_ + l], x);
    return j;
}

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

namespace {

int precedence(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Add:
        case Expr::Kind::Sub: return 1;
        case Expr::Kind::Mul:
        case Expr::Kind::Div: return 2;
        case Expr::Kind::Neg: return 3;
        case Expr::Kind::Pow: return 4;
        default: return 5;
    }
}

void format_double(std::ostringstream& os, double v) {
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        os << static_cast<long long>(v);
    } else {
        std::ostringstream tmp;
        tmp.precision(17);
        tmp << v;
        os << tmp.str();
    }
}

void print(std::ostringstream& os, const Expr& e, int parent_prec) {
    const int prec = precedence(e);
    const bool parens = prec < parent_prec;
    if (parens) os << '(';
    switch (e.kind) {
        case Expr::Kind::Const:
            if (e.value.real() < 0.0 && !parens) {
                os << '(';
                format_double(os, e.value.real());
                os << ')';
            } else {
                format_double(os, e.value.real());
            }
            break;
        case Expr::Kind::Var: os << 'x' << (e.var + 1); break;
        case Expr::Kind::Add:
            print(os, *e.lhs, prec);
            os << " + ";
            print(os, *e.rhs, prec + 1);
            break;
        case Expr::Kind::Sub:
            print(os, *e.lhs, prec);
            os << " - ";
            print(os, *e.rhs, prec + 1);
            break;
        case Expr::Kind::Mul:
            print(os, *e.lhs, prec);
            os << "*";
            print(os, *e.rhs, prec);
            break;
        case Expr::Kind::Div:
            print(os, *e.lhs, prec);
            os << "/";
            print(os, *e.rhs, prec + 1);
            break;
        case Expr::Kind::Pow:
            print(os, *e.lhs, prec + 1);
            os << '^';
            if (e.exponent < 0) {
                os << '(';
                format_double(os, e.exponent);
                os << ')';
            } else {
                format_double(os, e.exponent);
            }
            break;
        case Expr::Kind::Call:
            switch (e.func) {
                case FuncKind::Sin: os << "sin"; break;
                case FuncKind::Cos: os << "cos"; break;
                case FuncKind::Exp: os << "exp"; break;
                case FuncKind::Sinh: os << "sinh"; break;
                case FuncKind::Cosh: os << "cosh"; break;
            }
            os << '(';
            print(os, *e.lhs, 0);
            os << ')';
            break;
        case Expr::Kind::Neg:
            os << '-';
            print(os, *e.lhs, prec + 1);
            break;
    }
    if (parens) os << ')';
}

}  // namespace

std::string to_string(const Expr& e) {
    std::ostringstream os;
    print(os, e, 0);
    return os.str();
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case Expr::Kind::Const: return a->value == b->value;
        case Expr::Kind::Var: return a->var == b->var;
        case Expr::Kind::Pow: return a->exponent == b->exponent && equal(a->lhs, b->lhs);
        case Expr::Kind::Call: return a->func == b->func && equal(a->lhs, b->lhs);
        case Expr::Kind::Neg: return equal(a->lhs, b->lhs);
        default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    }
}

bool has_transcendental(const Expr& e) {
    if (e.kind == Expr::Kind::Call) return true;
    if (e.lhs && has_transcendental(*e.lhs)) return true;
    if (e.rhs && has_transcendental(*e.rhs)) return true;
    return false;
}

}  // namespace fracroot
