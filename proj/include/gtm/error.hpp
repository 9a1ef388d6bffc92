#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gtm {

// Base class for all library errors. Verdict-style outcomes (divergence,
// insufficient precision, blocked runs) are ordinary return values, not
// exceptions; exceptions signal contract breaches.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AlphabetError : public Error {
public:
    using Error::Error;
};

// Malformed data while reading a name; `offset` is the symbol position of the
// first contradiction.
class DecodeError : public Error {
public:
    DecodeError(std::string message, std::size_t offset)
        : Error(message + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// A stream claimed to be a name of something turned out not to be one
// (e.g. an empty running intersection in an interval stream).
class NotANameError : public DecodeError {
public:
    using DecodeError::DecodeError;
};

// A function declared monotone / monotone-constant was caught violating its
// declared class at probed points.
class ClassViolationError : public Error {
public:
    using Error::Error;
};

class CarrierError : public Error {
public:
    using Error::Error;
};

// Structural problems with machines: missing realizer, signature mismatch,
// precondition breach of a transformation.
class MachineError : public Error {
public:
    using Error::Error;
};

// A computation could not reach the requested precision within its budget
// where the operation's contract makes that an error rather than a verdict.
class PrecisionError : public Error {
public:
    using Error::Error;
};

} // namespace gtm
