#pragma once

#include <stdexcept>
#include <string>

namespace stochorder {

// Precondition violations on numerical inputs (empty sample, bad dimension, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or schema-violating configuration. `key` names the offending entry
// and `line` is 1-based when the error comes from a file, 0 otherwise.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what, int line = 0)
      : std::runtime_error(format(key, what, line)), key_(std::move(key)), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& key, const std::string& what, int line) {
    std::string msg = "config error";
    if (line > 0) msg += " (line " + std::to_string(line) + ")";
    if (!key.empty()) msg += " at '" + key + "'";
    return msg + ": " + what;
  }

  std::string key_;
  int line_;
};

class IoError : public std::runtime_error {
 public:
  IoError(std::string path, const std::string& what)
      : std::runtime_error(what + ": " + path), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// Dataset produced under a different configuration than the one supplied.
class StaleDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stochorder
