#pragma once

#include <stdexcept>
#include <string>

namespace wsn {

// A violated model invariant: scheduling into the past, acking unsent data,
// delivering a message twice. These indicate bugs, never bad input.
class ModelError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Rejected user input (config files, CLI flags, scenario constraints).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wsn
