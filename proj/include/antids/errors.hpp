#pragma once

#include <stdexcept>
#include <string>

namespace antids {

// Bad configuration or invalid argument at an API boundary (CLI exit code 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Math kernel called outside its domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Anything wrong with input data: parsing, label mapping, encoding, splitting
// (CLI exit code 2).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public DataError {
public:
    ParseError(std::size_t line, const std::string& what)
        : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class MappingError : public DataError {
public:
    using DataError::DataError;
};

class EncodingError : public DataError {
public:
    using DataError::DataError;
};

class ShapeError : public DataError {
public:
    using DataError::DataError;
};

// Reading or writing a file failed; the message names the path.
class IoError : public DataError {
public:
    using DataError::DataError;
};

class SplitError : public DataError {
public:
    using DataError::DataError;
};

// A precondition of a stateful operation was broken by the caller, or an
// internal invariant no longer holds (CLI exit code 3).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace antids
