#pragma once

#include <stdexcept>
#include <string>

namespace restlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotInvertible : Error {
    using Error::Error;
};
struct EvenModulus : Error {
    using Error::Error;
};
struct EmptyRange : Error {
    using Error::Error;
};
struct NoSquareRoot : Error {
    using Error::Error;
};
struct BudgetExceeded : Error {
    using Error::Error;
};
struct QuadratureNotConverged : Error {
    using Error::Error;
};
struct WindowTooSmall : Error {
    using Error::Error;
};
struct InsufficientNodes : Error {
    using Error::Error;
};
struct EmptyModuli : Error {
    using Error::Error;
};
struct EmptyShell : Error {
    using Error::Error;
};
struct DegenerateFit : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};

} // namespace restlab
