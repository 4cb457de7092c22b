#pragma once

#include <stdexcept>
#include <string>

namespace rookmix {

/// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A bound's hypothesis does not hold for the given parameters (e.g. the
/// eigenvalue condition of Wilson's method).
class precondition_error : public domain_error {
 public:
  using domain_error::domain_error;
};

/// A brute-force computation would exceed the configured state cap, or an
/// evolution ran past its horizon.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rookmix
