#include "gsf/errors.hpp"

namespace gsf {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::GridMismatch: return "GridMismatch";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::NonConvergence: return "NonConvergence";
        case ErrorKind::Collapse: return "Collapse";
        case ErrorKind::ZeroMinimizer: return "ZeroMinimizer";
        case ErrorKind::SymbolNotPositive: return "SymbolNotPositive";
        case ErrorKind::RegimeRefusal: return "RegimeRefusal";
        case ErrorKind::MemoryGuard: return "MemoryGuard";
        case ErrorKind::EigensolverFailure: return "EigensolverFailure";
        case ErrorKind::AmbiguousKernel: return "AmbiguousKernel";
        case ErrorKind::MorseIndexMismatch: return "MorseIndexMismatch";
        case ErrorKind::Parse: return "Parse";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace gsf
