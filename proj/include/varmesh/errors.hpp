#pragma once

#include <stdexcept>
#include <string>

namespace varmesh {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Lattice construction and grid-compatibility violations.
class GridError : public Error {
    using Error::Error;
};

// Field payload failed validation (size, finiteness, component count).
class FieldError : public Error {
    using Error::Error;
};

// Binary field-file problems. The three header failure modes are
// distinguished so callers can react to them individually.
class FieldIoError : public Error {
public:
    enum class Code { BadMagic, DimensionMismatch, TruncatedPayload, Io };

    FieldIoError(Code code, const std::string& what) : Error(what), code_(code) {}
    Code code() const { return code_; }

private:
    Code code_;
};

class ImageFormatError : public Error {
    using Error::Error;
};

// Iterative solver gave up; carries the last measured relative residual.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

// Semantically unusable target: folded mesh, nonpositive density,
// transformation boundary off the lattice hull. CLI maps this to its
// own exit code, distinct from structural input errors.
class TargetError : public Error {
    using Error::Error;
};

class ConfigError : public Error {
    using Error::Error;
};

} // namespace varmesh
