#pragma once

#include <stdexcept>
#include <string>

namespace reidbench {

// Base of every error the library throws. The CLI maps all of these to
// exit code 2; usage errors are handled by the argument parser (exit 1).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed text input (CSV rows, JSON configs); message carries a location.
class ParseError : public Error {
public:
    using Error::Error;
};

// Well-formed input violating a content rule (duplicate ids, unknown tokens).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Binary layout violations: bad magic, truncated payload, trailing bytes.
class FormatError : public Error {
public:
    using Error::Error;
};

// Content that decodes but cannot be used (e.g. a zero-norm embedding row).
class DataError : public Error {
public:
    using Error::Error;
};

// A caller violated an operation's precondition.
class ContractError : public Error {
public:
    using Error::Error;
};

// Manifest and embedding store disagree (dangling or mismatched row).
class BindingError : public Error {
public:
    using Error::Error;
};

// Metric evaluation has no defined result (e.g. every query excluded).
class EvaluationError : public Error {
public:
    using Error::Error;
};

}  // namespace reidbench
