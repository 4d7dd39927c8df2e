#pragma once

#include <stdexcept>
#include <string>

namespace hybridnet {

// Bad or inconsistent configuration (unknown keys, invalid ranges, empty action spaces).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A power action exceeded its access point's budget. Always an agent bug.
class ConstraintViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Tensor or vector dimensions disagree with the network topology.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace hybridnet
