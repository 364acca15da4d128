#pragma once

#include <stdexcept>

namespace camp {

/// Inconsistent matrix/vector sizes.
class DimensionError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

class NotPositiveDefinite : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Invalid scenario, benchmark or file contents.
class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace camp
