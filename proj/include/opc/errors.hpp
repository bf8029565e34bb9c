#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace opc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad text, ill-formed terms, unknown names, arity or payload errors.
class InputError : public Error {
public:
    using Error::Error;
};

/// A configured resource cap (states, support size) was exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Byte offsets into a parsed input.
struct SourceSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
};

class ParseError : public InputError {
public:
    ParseError(const std::string& message, SourceSpan span)
        : InputError(message + " at " + std::to_string(span.begin) + ".." + std::to_string(span.end)),
          span_(span) {}

    SourceSpan span() const noexcept { return span_; }

private:
    SourceSpan span_;
};

} // namespace opc
