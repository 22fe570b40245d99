#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace odecert {

/// Base of every failure the library reports. The CLI maps the concrete
/// subclass to an exit code, so throw sites always use a named subclass.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define ODECERT_ERROR_CLASS(NAME)                                            \
    class NAME : public Error {                                              \
    public:                                                                  \
        explicit NAME(const std::string& what) : Error(#NAME, what) {}       \
    };

ODECERT_ERROR_CLASS(SingularMatrix)
ODECERT_ERROR_CLASS(ComplexSpectrum)
ODECERT_ERROR_CLASS(DefectiveMatrix)
ODECERT_ERROR_CLASS(UnknownProblem)
ODECERT_ERROR_CLASS(InvalidProblem)
ODECERT_ERROR_CLASS(UnrepresentableProduct)
ODECERT_ERROR_CLASS(StepSizeUnderflow)
ODECERT_ERROR_CLASS(MaxStepsExceeded)
ODECERT_ERROR_CLASS(NonFiniteState)
ODECERT_ERROR_CLASS(NonMonotoneTime)
ODECERT_ERROR_CLASS(DimensionMismatch)
ODECERT_ERROR_CLASS(InvalidTrajectory)
ODECERT_ERROR_CLASS(OutOfDomain)
ODECERT_ERROR_CLASS(GridOutsideDomain)
ODECERT_ERROR_CLASS(IoError)

#undef ODECERT_ERROR_CLASS

/// Syntax error in a coefficient expression or problem file. Carries the
/// byte offset of the offending token within the parsed text.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& what)
        : Error("ParseError", what + " (at byte " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace odecert
