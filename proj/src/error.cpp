#include "nitsche_iga/error.hpp"

namespace niga {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NotNondecreasing: return "NotNondecreasing";
        case ErrorCode::NotOpen: return "NotOpen";
        case ErrorCode::ExcessMultiplicity: return "ExcessMultiplicity";
        case ErrorCode::UnsupportedDegree: return "UnsupportedDegree";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
        case ErrorCode::DegenerateJacobian: return "DegenerateJacobian";
        case ErrorCode::IncompatibleGeometry: return "IncompatibleGeometry";
        case ErrorCode::UnknownCase: return "UnknownCase";
        case ErrorCode::SingularGram: return "SingularGram";
        case ErrorCode::SingularMatrix: return "SingularMatrix";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::NotSPD: return "NotSPD";
        case ErrorCode::InsufficientLevels: return "InsufficientLevels";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

bool is_config_error(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NotNondecreasing:
        case ErrorCode::NotOpen:
        case ErrorCode::ExcessMultiplicity:
        case ErrorCode::UnsupportedDegree:
        case ErrorCode::UnsupportedOrder:
        case ErrorCode::IncompatibleGeometry:
        case ErrorCode::UnknownCase:
        case ErrorCode::InsufficientLevels:
        case ErrorCode::ConfigError:
        case ErrorCode::IoError:
        case ErrorCode::InvalidArgument:
            return true;
        default:
            return false;
    }
}

}  // namespace niga
