#pragma once

#include <stdexcept>
#include <string>

namespace bandit {

/// Raised when a posterior update or factorization loses positive
/// definiteness or otherwise fails numerically.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bandit
