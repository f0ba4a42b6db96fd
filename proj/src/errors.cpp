#include "specmat/errors.hpp"
#include "specmat/exec.hpp"

#ifdef SPECMAT_HAVE_OPENMP
#include <omp.h>
#endif

namespace specmat {

const char* to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NonRealInput: return "NonRealInput";
    case ErrorKind::BoundaryZero: return "BoundaryZero";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::NonConverged: return "NonConverged";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::DegreeTooHigh: return "DegreeTooHigh";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::SingularJordan: return "SingularJordan";
    case ErrorKind::ResolutionTooLow: return "ResolutionTooLow";
    case ErrorKind::NearSpectrum: return "NearSpectrum";
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::IoError: return "IoError";
    }
    return "?";
}

int exit_code(ErrorKind k) {
    switch (k) {
    case ErrorKind::InvalidInput:
    case ErrorKind::NonRealInput:
    case ErrorKind::OutOfDomain:
    case ErrorKind::DegreeTooHigh:
    case ErrorKind::ResolutionTooLow:
    case ErrorKind::IoError:
        return 2;
    case ErrorKind::SingularMatrix:
    case ErrorKind::SingularJordan:
        return 4;
    default:
        return 3;
    }
}

int max_threads() {
#ifdef SPECMAT_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace specmat
