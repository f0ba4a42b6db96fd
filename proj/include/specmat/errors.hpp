#pragma once

#include <stdexcept>
#include <string>

namespace specmat {

enum class ErrorKind {
    InvalidInput,
    SingularMatrix,
    NonRealInput,
    BoundaryZero,
    NonConvergent,
    NonConverged,
    IllConditioned,
    DegreeTooHigh,
    OutOfDomain,
    SingularJordan,
    ResolutionTooLow,
    NearSpectrum,
    NoSignChange,
    IoError
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

// CLI exit status: 2 bad input, 3 numerical failure, 4 singular refusal
int exit_code(ErrorKind k);

} // namespace specmat
