#include "randheston/types.hpp"

namespace randheston {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::OutsideDomain: return "OutsideDomain";
        case ErrorKind::BranchFailure: return "BranchFailure";
        case ErrorKind::CalibrationFailure: return "CalibrationFailure";
        case ErrorKind::NoBracket: return "NoBracket";
        case ErrorKind::MaxIterations: return "MaxIterations";
        case ErrorKind::NonConvex: return "NonConvex";
        case ErrorKind::NonConvergent: return "NonConvergent";
        case ErrorKind::NoArbitrageViolation: return "NoArbitrageViolation";
        case ErrorKind::AtmUndefined: return "AtmUndefined";
        case ErrorKind::UnsupportedOmega: return "UnsupportedOmega";
        case ErrorKind::InvalidRegime: return "InvalidRegime";
        case ErrorKind::NotAdmissible: return "NotAdmissible";
        case ErrorKind::LeverageViolation: return "LeverageViolation";
        case ErrorKind::UnsupportedForwardCase: return "UnsupportedForwardCase";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace randheston
