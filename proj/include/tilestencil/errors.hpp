#pragma once

#include <stdexcept>

namespace tilestencil {

// A matrix handed to the tile layer is not a multiple of the 32x32 tile.
class AlignmentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptyGridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite values reaching a grid.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A configuration does not fit the simulated machine (DRAM footprint).
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad machine config, unknown scenario/method name, malformed options.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tilestencil
