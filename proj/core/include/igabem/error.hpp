#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace igabem {

/// Base of every exception thrown by the library. `code()` is a short,
/// stable identifier (e.g. "E_DOMAIN") that the CLI prints verbatim.
class Error : public std::runtime_error {
public:
    Error(std::string_view code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Parameter outside the valid range of a basis or patch.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("E_DOMAIN", what) {}
};

/// Malformed input to an operation (bad knot vector, size mismatch, ...).
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error("E_INVALID", what) {}
};

class UnsupportedError : public Error {
public:
    explicit UnsupportedError(const std::string& what) : Error("E_UNSUPPORTED", what) {}
};

/// Zero tangent cross product at a surface point.
class SingularFrameError : public Error {
public:
    explicit SingularFrameError(const std::string& what) : Error("E_SINGULAR_FRAME", what) {}
};

/// Trimming map with a non-positive Jacobian determinant.
class DegenerateTrimError : public Error {
public:
    explicit DegenerateTrimError(const std::string& what) : Error("E_DEGENERATE_TRIM", what) {}
};

/// Source and field point coincide in a kernel evaluation.
class SingularityError : public Error {
public:
    explicit SingularityError(const std::string& what) : Error("E_SINGULAR_KERNEL", what) {}
};

class SingularMatrixError : public Error {
public:
    SingularMatrixError(const std::string& what, std::size_t pivot)
        : Error("E_SINGULAR_MATRIX", what), pivot_(pivot) {}

    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

/// Model file problem. `pointer()` is a JSON pointer to the offending value.
class ParseError : public Error {
public:
    ParseError(const std::string& pointer, const std::string& what)
        : Error("E_PARSE", pointer + ": " + what), pointer_(pointer) {}

    const std::string& pointer() const noexcept { return pointer_; }

private:
    std::string pointer_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error("E_IO", what) {}
};

}  // namespace igabem
