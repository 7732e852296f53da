#pragma once

#include "pdpore/common.hpp"
#include "pdpore/influence.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pdpore {

/// Cylindrical hole removed from a lattice. The cylinder axis is parallel
/// to coordinate `axis` and passes through `origin`.
struct CylinderExclusion
{
  int axis = 2;
  Vec3 origin = Vec3::Zero();
  double radius = 0.0;

  bool operator==(const CylinderExclusion&) const = default;
};

/// Regular lattice over an axis-aligned box.
struct LatticeSpec
{
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Ones();
  Vec3 spacing = Vec3::Constant(0.1);
  std::optional<CylinderExclusion> exclusion;

  void validate() const;
  /// Cells per axis: floor(extent / spacing), with a relative slack so that
  /// exact multiples are not lost to round-off.
  std::array<int, 3> cell_counts() const;
  double cell_volume() const { return spacing.prod(); }

  bool operator==(const LatticeSpec&) const = default;
};

using TagMask = std::uint32_t;
inline constexpr std::size_t max_tags = 32;

/// Reference configuration of the particle discretization.
struct ParticleSet
{
  std::vector<Vec3> positions;
  std::vector<double> volumes;
  std::vector<TagMask> tags;
  std::vector<std::string> tag_names;
  /// Lattice spacing the set was generated with (zero if not a lattice).
  Vec3 spacing = Vec3::Zero();

  std::size_t size() const noexcept { return positions.size(); }

  /// Registers a tag name and returns its bit index. Re-registering returns
  /// the existing index.
  int add_tag(const std::string& name);
  /// Bit index of a tag, or -1.
  int tag_index(const std::string& name) const;
  bool has_tag(std::size_t particle, int bit) const noexcept
  {
    return (tags[particle] >> bit) & 1U;
  }
  std::vector<Index> tagged(int bit) const;

  double total_volume() const;
};

/// Generates particles at the centres of a regular lattice covering the box,
/// omitting cells whose centre lies inside the exclusion cylinder. If the
/// extent is not a multiple of the spacing, the lattice is centred in the box.
ParticleSet build_lattice(const LatticeSpec& spec);

/// Compressed horizon adjacency. Neighbours of each particle are sorted by
/// index; `reverse[b]` is the position of the opposite bond (j -> i).
struct NeighborList
{
  std::vector<std::size_t> offsets;
  std::vector<Index> indices;
  std::vector<double> bond_length;
  std::vector<std::size_t> reverse;
  double horizon = 0.0;

  std::size_t particle_count() const noexcept { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::size_t bond_count() const noexcept { return indices.size(); }
  std::span<const Index> neighbors(std::size_t i) const
  {
    return {indices.data() + offsets[i], offsets[i + 1] - offsets[i]};
  }
  std::size_t count(std::size_t i) const { return offsets[i + 1] - offsets[i]; }
};

/// Closed-ball horizon search (0 < |xj - xi| <= horizon) using cubic bins of
/// edge `horizon`.
NeighborList build_neighbors(const ParticleSet& particles, double horizon);

struct WeightedVolume
{
  std::vector<double> m;
  /// Particles with an empty neighbourhood (m = 0).
  std::vector<Index> isolated;
};

/// m_i = sum_j omega(|xi|) |xi|^2 dV_j
WeightedVolume weighted_volume(const ParticleSet& particles,
                               const NeighborList& neighbors,
                               const Influence& influence);

} // namespace pdpore
