#pragma once

#include <stdexcept>
#include <string>

namespace replan {

/// Invalid scenario or CLI configuration (bad keys, out-of-range values,
/// start/goal placement violations).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An operation was called on an object in a state that cannot satisfy it
/// (empty tree queried, path exhausted before the goal, ...).
class StateError : public std::logic_error {
 public:
  explicit StateError(const std::string& msg) : std::logic_error(msg) {}
};

/// File I/O failure; message carries the offending path.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace replan
