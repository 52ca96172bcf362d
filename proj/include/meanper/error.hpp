#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace meanper {

enum class ErrorKind {
    InvalidArgument,
    Range,
    NoConvergence,
    AmbiguousCount,
    DegenerateZero,
    UnsupportedMultiplicity,
    InconsistentProbe,
    Domain,
    InsufficientData,
    Parse,
};

std::string_view error_kind_name(ErrorKind kind);

/// Base error for every failure raised by the engine. The message is
/// prefixed by the kind name so that CLI output stays greppable.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Newton refinement gave up; carries the last iterate and its residual.
class NoConvergenceError : public Error {
public:
    NoConvergenceError(const std::string& what, std::complex<double> last, double residual)
        : Error(ErrorKind::NoConvergence, what), last_iterate_(last), residual_(residual) {}

    std::complex<double> last_iterate() const noexcept { return last_iterate_; }
    double residual() const noexcept { return residual_; }

private:
    std::complex<double> last_iterate_;
    double residual_;
};

inline std::string_view error_kind_name(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Range: return "range-error";
    case ErrorKind::NoConvergence: return "no-convergence";
    case ErrorKind::AmbiguousCount: return "ambiguous-count";
    case ErrorKind::DegenerateZero: return "degenerate-zero";
    case ErrorKind::UnsupportedMultiplicity: return "unsupported-multiplicity";
    case ErrorKind::InconsistentProbe: return "inconsistent-probe";
    case ErrorKind::Domain: return "domain-error";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::Parse: return "parse-error";
    }
    return "error";
}

inline void require(bool condition, ErrorKind kind, const std::string& what) {
    if (!condition) throw Error(kind, what);
}

}  // namespace meanper
