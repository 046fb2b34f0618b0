#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fedboost {

/// Base class of all errors thrown by this library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input. `line()` is 1-based and refers to the source stream.
class parse_error : public error {
public:
    parse_error(std::size_t line, const std::string& what)
        : error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Malformed, truncated, or version-mismatched model bytes.
class decode_error : public error {
public:
    using error::error;
};

/// Invalid experiment configuration. `key()` names the offending entry.
class config_error : public error {
public:
    config_error(std::string key, const std::string& what)
        : error("config key '" + key + "': " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace fedboost
