#pragma once

#include <stdexcept>
#include <string>

namespace space {

// Error categories shared by every module. All derive from std::runtime_error
// or std::invalid_argument so callers may catch at either granularity.

class invalid_argument_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class shape_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class invalid_action_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class invalid_state_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class numeric_domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace space
