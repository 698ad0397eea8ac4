#pragma once

#include <stdexcept>
#include <string>

namespace tgn {

/// Topology violates a structural condition (cycle, disconnection, bad root).
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration (CFL violation, missing file, bad mode).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Physically inadmissible input (non-positive inductance/capacitance, ...).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tgn
