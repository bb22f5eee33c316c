#ifndef SRLI_ERRORS_HPP
#define SRLI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace srli {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed corpus input; carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, long line)
        : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    explicit ParseError(const std::string& msg) : Error(msg), line_(-1) {}
    long line() const { return line_; }

private:
    long line_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ModelIoError : public Error {
public:
    using Error::Error;
};

class TrainingError : public Error {
public:
    using Error::Error;
};

class EvaluationError : public Error {
public:
    using Error::Error;
};

} // namespace srli

#endif
