#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zbrng {

/// Base class of everything the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (bad file, wrong shape, bad literal).
class InputError : public Error {
public:
    using Error::Error;
};

/// A literal or file failed to parse; `position()` is a 0-based offset
/// into the text that was being parsed.
class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t position)
        : InputError(what + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// The input was well formed but the algebra does not cooperate: no identity,
/// non-integral structure constants, a stalled eigenspace split, ...
class AlgebraError : public Error {
public:
    using Error::Error;
};

} // namespace zbrng
