#pragma once

#include <stdexcept>
#include <string>

namespace landau {

// Exit-code taxonomy used by the CLI: config=2, numeric=3, hypothesis=4.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class HypothesisError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace landau
