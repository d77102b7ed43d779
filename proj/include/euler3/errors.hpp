#pragma once

#include <stdexcept>
#include <string>

namespace euler3 {

// Root of every failure raised by the library. The CLI maps the concrete
// type onto its exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (masses <= 0,
// ratio outside (0,1), bad energy window, undersampled grid, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Two bodies closer than the guard distance.
class CollisionError : public Error {
public:
    using Error::Error;
};

// An iterative method failed to produce a usable answer.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Malformed orbit file. The message starts with the JSON path of the field.
class SchemaError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace euler3
