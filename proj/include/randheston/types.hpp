#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace randheston {

using cplx = std::complex<double>;

enum class ErrorKind {
    OutsideDomain,
    BranchFailure,
    CalibrationFailure,
    NoBracket,
    MaxIterations,
    NonConvex,
    NonConvergent,
    NoArbitrageViolation,
    AtmUndefined,
    UnsupportedOmega,
    InvalidRegime,
    NotAdmissible,
    LeverageViolation,
    UnsupportedForwardCase,
    InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace randheston
