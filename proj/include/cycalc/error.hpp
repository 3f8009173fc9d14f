#pragma once

#include <stdexcept>
#include <string>

namespace cycalc {

/// Failure categories; the CLI maps them onto exit codes.
enum class ErrorKind {
    Math,      // a documented operation error ("not univariate", "impure scheme", ...)
    Parse,     // malformed fixture or polynomial text
    Internal,  // a violated invariant ("length not integral", ...)
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    explicit Error(const std::string& what) : Error(ErrorKind::Math, what) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline Error internal_error(const std::string& what) { return Error(ErrorKind::Internal, what); }
inline Error parse_error(const std::string& what) { return Error(ErrorKind::Parse, what); }

}  // namespace cycalc
