#pragma once

#include <stdexcept>
#include <string>

namespace swingup {

// Invalid argument or parameter outside the physical domain.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Time integration produced a state that violates the conservation checks.
class IntegrationError : public std::runtime_error {
public:
  IntegrationError(const std::string& what, double drift)
      : std::runtime_error(what), drift_(drift) {}

  double drift() const noexcept { return drift_; }

private:
  double drift_;
};

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace swingup
