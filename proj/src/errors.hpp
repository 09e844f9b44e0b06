#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracroot {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// specfun
struct PoleError : Error {
    using Error::Error;
};
struct OverflowError : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};

// expr
struct SyntaxError : Error {
    SyntaxError(const std::string& what, std::size_t pos)
        : Error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};
struct ArityError : Error {
    using Error::Error;
};
struct DivByZero : Error {
    DivByZero(const std::string& what, int comp)
        : Error(what + " (component " + std::to_string(comp + 1) + ")"), component(comp) {}
    int component;
};

// fracderiv
struct UnsupportedExpr : Error {
    using Error::Error;
};
struct UnsupportedExponent : Error {
    using Error::Error;
};
struct SingularPointError : Error {
    using Error::Error;
};

// linalg
struct SingularMatrixError : Error {
    using Error::Error;
};

// solvers / sweep
struct PreconditionError : Error {
    using Error::Error;
};
struct EmptyGridError : Error {
    using Error::Error;
};

}  // namespace fracroot
