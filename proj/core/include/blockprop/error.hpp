#pragma once

#include <stdexcept>
#include <string>

namespace blockprop {

/// Invalid user configuration: scenario keys, parameter ranges.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or incomplete input data files.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace blockprop
