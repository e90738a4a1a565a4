#pragma once

#include <stdexcept>
#include <string>

namespace psra {

/// A numeric precondition failed: divergent queue, unstable recursion,
/// empty conditioning set and the like.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid user-supplied configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace psra
