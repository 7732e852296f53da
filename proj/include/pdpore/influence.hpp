#pragma once

#include <string_view>

namespace pdpore {

/// Radial bond weight omega(|xi|). Unit influence is the default; the
/// inverse-distance profile omega = delta/r is available but not used by
/// any benchmark.
struct Influence
{
  enum class Kind
  {
    unit,
    inverse_distance
  };

  Kind kind = Kind::unit;
  double horizon = 1.0;

  double operator()(double bond_length) const noexcept
  {
    if (kind == Kind::inverse_distance)
      return horizon / bond_length;
    return 1.0;
  }
};

std::string_view to_string(Influence::Kind kind);
Influence::Kind influence_kind_from_string(std::string_view name);

} // namespace pdpore
