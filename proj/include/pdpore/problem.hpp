#pragma once

#include "pdpore/discretization.hpp"
#include "pdpore/fields.hpp"
#include "pdpore/influence.hpp"
#include "pdpore/material.hpp"
#include "pdpore/solver.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace pdpore {

// ---------------------------------------------------------------------------
// Tag selectors. Each one is applied to the candidate particles of a tag
// definition (all particles, narrowed by `within` and `exclude`).

struct SelectAll
{
  bool operator==(const SelectAll&) const = default;
};

/// Closed axis-aligned box.
struct SelectBox
{
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();
  bool operator==(const SelectBox&) const = default;
};

/// The outermost `layers` lattice layers on one side of the candidates.
struct SelectLayer
{
  enum class Side
  {
    low,
    high
  };
  int axis = 2;
  Side side = Side::low;
  int layers = 1;
  bool operator==(const SelectLayer&) const = default;
};

/// The `count` candidates closest to `point` (ties broken by index).
struct SelectNearest
{
  Vec3 point = Vec3::Zero();
  int count = 1;
  bool operator==(const SelectNearest&) const = default;
};

/// Distance r from the line parallel to `axis` through `origin`, with
/// r_min <= r < r_max.
struct SelectShell
{
  int axis = 2;
  Vec3 origin = Vec3::Zero();
  double r_min = 0.0;
  double r_max = 0.0;
  bool operator==(const SelectShell&) const = default;
};

using TagSelector = std::variant<SelectAll, SelectBox, SelectLayer, SelectNearest, SelectShell>;

struct TagDefinition
{
  std::string name;
  TagSelector selector = SelectAll{};
  /// Candidates must carry every one of these (earlier) tags.
  std::vector<std::string> within;
  /// Candidates must carry none of these (earlier) tags.
  std::vector<std::string> exclude;
  bool operator==(const TagDefinition&) const = default;
};

/// Either a multiple of the largest lattice spacing or an absolute length.
struct HorizonSpec
{
  enum class Kind
  {
    ratio,
    absolute
  };
  Kind kind = Kind::ratio;
  double value = 3.0;
  bool operator==(const HorizonSpec&) const = default;
};

struct OutputOptions
{
  bool csv = true;
  bool vtk = false;
  bool operator==(const OutputOptions&) const = default;
};

struct ProblemSpec
{
  LatticeSpec lattice;
  HorizonSpec horizon;
  Influence::Kind influence = Influence::Kind::unit;
  MaterialParams material;
  EffectiveStressParams effective_stress;
  std::optional<PorePressureField> pressure_field;
  BodyForceField body_force = ConstantBodyForce{};
  std::vector<TagDefinition> tags;
  BoundaryConditions bcs;
  LoadSchedule schedule;
  SolverConfig solver;
  OutputOptions output;

  /// Cross-field validation; throws ConfigError naming the key.
  void validate() const;
  double horizon_length() const;

  bool operator==(const ProblemSpec&) const = default;
};

/// Lattice plus tags.
ParticleSet build_particles(const ProblemSpec& spec);

/// Applies one tag definition to `particles` and returns the tagged count.
std::size_t apply_tag(ParticleSet& particles, const TagDefinition& tag);

} // namespace pdpore
