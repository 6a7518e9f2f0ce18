#pragma once

#include <stdexcept>
#include <string>

namespace niga {

enum class ErrorCode {
    NotNondecreasing,
    NotOpen,
    ExcessMultiplicity,
    UnsupportedDegree,
    OutOfDomain,
    IndexOutOfRange,
    UnsupportedOrder,
    DegenerateJacobian,
    IncompatibleGeometry,
    UnknownCase,
    SingularGram,
    SingularMatrix,
    ConvergenceFailure,
    NotSPD,
    InsufficientLevels,
    ConfigError,
    IoError,
    InvalidArgument,
};

const char* to_string(ErrorCode code) noexcept;

// Configuration-class errors map to CLI exit code 2, numerical ones to 3.
bool is_config_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
    throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace niga
