#pragma once

#include <stdexcept>
#include <string>

namespace eqfd {

enum class ErrorKind {
    input,        // malformed arguments
    domain,       // argument outside the declared domain
    validation,   // weight/config failed validation
    contract,     // caller broke a precondition the callee cannot check cheaply
    unsupported,  // valid request the implementation does not cover
    numerical,    // quadrature failure, folded mesh
    convergence   // iteration limit hit
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct InputError : Error {
    explicit InputError(const std::string& what) : Error(ErrorKind::input, what) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

struct ContractError : Error {
    explicit ContractError(const std::string& what) : Error(ErrorKind::contract, what) {}
};

struct UnsupportedDimensionError : Error {
    explicit UnsupportedDimensionError(const std::string& what) : Error(ErrorKind::unsupported, what) {}
};

/// Numerical failure carrying the best estimate reached before giving up.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, double estimate)
        : Error(ErrorKind::numerical, what), estimate_(estimate) {}
    double estimate() const noexcept { return estimate_; }

protected:
    NumericalError(ErrorKind kind, const std::string& what, double estimate)
        : Error(kind, what), estimate_(estimate) {}

private:
    double estimate_;
};

/// Iteration budget exhausted; estimate() is the last residual.
class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, double last_residual)
        : NumericalError(ErrorKind::convergence, what, last_residual) {}
    double last_residual() const noexcept { return estimate(); }
};

/// A cell of a generated mesh has non-positive Jacobian.
struct MeshFoldError : NumericalError {
    MeshFoldError(const std::string& what, double min_jacobian) : NumericalError(what, min_jacobian) {}
};

}  // namespace eqfd
