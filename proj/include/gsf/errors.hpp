#pragma once

#include <stdexcept>
#include <string>

namespace gsf {

enum class ErrorKind {
    InvalidArgument,
    GridMismatch,
    NonFinite,
    NonConvergence,
    Collapse,
    ZeroMinimizer,
    SymbolNotPositive,
    RegimeRefusal,
    MemoryGuard,
    EigensolverFailure,
    AmbiguousKernel,
    MorseIndexMismatch,
    Parse,
    Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace gsf
