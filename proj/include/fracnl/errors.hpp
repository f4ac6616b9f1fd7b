#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracnl {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class InsufficientHistoryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A time stepper produced a non-finite or runaway value.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, std::size_t step, double last_valid_time)
        : std::runtime_error(what), step_(step), last_valid_time_(last_valid_time) {}

    std::size_t step() const noexcept { return step_; }
    double last_valid_time() const noexcept { return last_valid_time_; }

private:
    std::size_t step_;
    double last_valid_time_;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised by the config parser; key() names the offending entry.
class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& key, const std::string& what)
        : std::invalid_argument(key.empty() ? what : key + ": " + what), key_(key) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace fracnl
