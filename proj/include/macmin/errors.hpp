#ifndef MACMIN_ERRORS_HPP
#define MACMIN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace macmin {

enum class ErrorKind {
    Syntax,
    UndeclaredSymbol,
    ArityMismatch,
    DuplicateSymbolDeclaration,
    SymbolClash,
    UnknownSymbol,
    CyclicDefinitions,
    ConstantExpansion,
    NotReduced,
    NotInstantiable,
    UnarySymbolsPresent,
    BudgetExceeded,
    InvalidPosition,
    VerifyMismatch,
    Config,
    Io,
};

const char* to_string(ErrorKind kind);

/// Exception carrying a machine-readable error kind next to the message.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

    /// Stable process exit code for the CLI (0 is success, 1 is generic).
    int exit_code() const;

private:
    ErrorKind kind_;
};

} // namespace macmin

#endif
