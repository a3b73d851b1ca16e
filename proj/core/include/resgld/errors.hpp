#pragma once

#include <stdexcept>
#include <string>

namespace resgld {

/// Invalid configuration or argument values (CLI exit code 2).
class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite state encountered while stepping a chain (CLI exit code 3).
class divergence_error : public std::runtime_error {
public:
  divergence_error(const std::string& what, long step)
      : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}
  long step() const noexcept { return step_; }

private:
  long step_;
};

/// Filesystem failures (CLI exit code 4).
class io_error : public std::runtime_error {
public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

/// Broken internal invariant (a bug, not a user error).
class internal_error : public std::logic_error {
public:
  explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace resgld
