#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdpore {

using Vec3 = Eigen::Vector3d;
using Index = std::uint32_t;

/// Invalid or inconsistent configuration. `key` names the offending
/// config key or CLI flag (may be empty for programmatic callers).
class ConfigError : public std::runtime_error
{
public:
  ConfigError(std::string key, const std::string& what)
    : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key))
  {
  }

  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

/// Two particles occupy the same deformed position.
class SingularBondError : public std::runtime_error
{
public:
  SingularBondError(Index i, Index j)
    : std::runtime_error("singular bond: particles " + std::to_string(i) + " and " +
                         std::to_string(j) + " coincide in the deformed configuration"),
      first(i), second(j)
  {
  }

  Index first;
  Index second;
};

class SolverError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace pdpore
