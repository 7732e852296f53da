#include "pdpore/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace pdpore {

namespace {

// Closed ball. The slack keeps nominal ties (|xi| == delta on a lattice)
// from being decided by the last bit of the coordinate arithmetic.
inline bool within_horizon(double distance, double horizon)
{
  return distance > 0.0 && distance <= horizon * (1.0 + 1e-12);
}

} // namespace

void LatticeSpec::validate() const
{
  for (int a = 0; a < 3; ++a) {
    if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a]))
      throw ConfigError("lattice.spacing", "spacing must be positive on every axis");
    if (!(hi[a] > lo[a]))
      throw ConfigError("lattice.hi", "upper corner must exceed lower corner on every axis");
  }
  if (exclusion) {
    if (exclusion->axis < 0 || exclusion->axis > 2)
      throw ConfigError("lattice.exclusion.axis", "axis must be 0, 1 or 2");
    if (!(exclusion->radius >= 0.0))
      throw ConfigError("lattice.exclusion.radius", "radius must be non-negative");
  }
  for (int n : cell_counts())
    if (n < 1)
      throw ConfigError("lattice", "domain is smaller than one cell");
}

std::array<int, 3> LatticeSpec::cell_counts() const
{
  std::array<int, 3> n{};
  for (int a = 0; a < 3; ++a) {
    const double cells = (hi[a] - lo[a]) / spacing[a];
    n[a] = cells > 0.0 ? static_cast<int>(std::floor(cells * (1.0 + 1e-9))) : 0;
  }
  return n;
}

int ParticleSet::add_tag(const std::string& name)
{
  if (int existing = tag_index(name); existing >= 0)
    return existing;
  if (tag_names.size() >= max_tags)
    throw ConfigError("tags", "at most " + std::to_string(max_tags) + " tags are supported");
  tag_names.push_back(name);
  return static_cast<int>(tag_names.size() - 1);
}

int ParticleSet::tag_index(const std::string& name) const
{
  auto it = std::find(tag_names.begin(), tag_names.end(), name);
  return it == tag_names.end() ? -1 : static_cast<int>(it - tag_names.begin());
}

std::vector<Index> ParticleSet::tagged(int bit) const
{
  std::vector<Index> out;
  if (bit < 0)
    return out;
  for (std::size_t i = 0; i < size(); ++i)
    if (has_tag(i, bit))
      out.push_back(static_cast<Index>(i));
  return out;
}

double ParticleSet::total_volume() const
{
  return std::accumulate(volumes.begin(), volumes.end(), 0.0);
}

ParticleSet build_lattice(const LatticeSpec& spec)
{
  spec.validate();
  const auto n = spec.cell_counts();
  Vec3 first;
  for (int a = 0; a < 3; ++a) {
    const double slack = (spec.hi[a] - spec.lo[a]) - n[a] * spec.spacing[a];
    first[a] = spec.lo[a] + 0.5 * slack + 0.5 * spec.spacing[a];
  }

  ParticleSet set;
  set.spacing = spec.spacing;
  const double volume = spec.cell_volume();
  const std::size_t capacity = static_cast<std::size_t>(n[0]) * n[1] * n[2];
  set.positions.reserve(capacity);

  for (int k = 0; k < n[2]; ++k)
    for (int j = 0; j < n[1]; ++j)
      for (int i = 0; i < n[0]; ++i) {
        const Vec3 x = first + Vec3(i * spec.spacing[0], j * spec.spacing[1], k * spec.spacing[2]);
        if (spec.exclusion) {
          Vec3 d = x - spec.exclusion->origin;
          d[spec.exclusion->axis] = 0.0;
          if (d.norm() < spec.exclusion->radius)
            continue;
        }
        set.positions.push_back(x);
      }

  if (set.positions.empty())
    throw ConfigError("lattice.exclusion", "exclusion removes every particle");
  set.volumes.assign(set.positions.size(), volume);
  set.tags.assign(set.positions.size(), 0);
  return set;
}

NeighborList build_neighbors(const ParticleSet& particles, double horizon)
{
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw ConfigError("horizon", "horizon must be positive");

  const std::size_t n = particles.size();
  NeighborList list;
  list.horizon = horizon;
  list.offsets.assign(n + 1, 0);
  if (n == 0)
    return list;

  Vec3 lo = particles.positions[0];
  for (const auto& x : particles.positions)
    lo = lo.cwiseMin(x);

  // Sorted bin keys; each query visits the 27 surrounding bins, so the cost
  // per particle depends only on the local density.
  using Key = std::int64_t;
  constexpr Key stride = Key{1} << 20;
  // Bins a little wider than the tie slack, so a pair that passes
  // within_horizon is never two bins apart after rounding.
  const double bin = horizon * (1.0 + 1e-9);
  auto bin_of = [&](const Vec3& x) {
    std::array<Key, 3> b{};
    for (int a = 0; a < 3; ++a)
      b[a] = static_cast<Key>(std::floor((x[a] - lo[a]) / bin));
    return b;
  };
  auto key_of = [&](const std::array<Key, 3>& b) { return (b[2] * stride + b[1]) * stride + b[0]; };

  std::vector<std::pair<Key, Index>> binned(n);
  for (std::size_t i = 0; i < n; ++i)
    binned[i] = {key_of(bin_of(particles.positions[i])), static_cast<Index>(i)};
  std::sort(binned.begin(), binned.end());

  std::vector<std::vector<Index>> found(n);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(n); ++si) {
    const auto i = static_cast<std::size_t>(si);
    const Vec3& xi = particles.positions[i];
    const auto b = bin_of(xi);
    auto& out = found[i];
    for (Key dz = -1; dz <= 1; ++dz)
      for (Key dy = -1; dy <= 1; ++dy)
        for (Key dx = -1; dx <= 1; ++dx) {
          if (b[0] + dx < 0 || b[1] + dy < 0 || b[2] + dz < 0)
            continue;
          const Key key = key_of({b[0] + dx, b[1] + dy, b[2] + dz});
          auto range = std::equal_range(binned.begin(), binned.end(), std::pair<Key, Index>{key, 0},
                                        [](const auto& l, const auto& r) { return l.first < r.first; });
          for (auto it = range.first; it != range.second; ++it) {
            const Index j = it->second;
            if (within_horizon((particles.positions[j] - xi).norm(), horizon))
              out.push_back(j);
          }
        }
    std::sort(out.begin(), out.end());
  }

  for (std::size_t i = 0; i < n; ++i)
    list.offsets[i + 1] = list.offsets[i] + found[i].size();
  list.indices.resize(list.offsets[n]);
  list.bond_length.resize(list.offsets[n]);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t b = list.offsets[i];
    for (Index j : found[i]) {
      list.indices[b] = j;
      list.bond_length[b] = (particles.positions[j] - particles.positions[i]).norm();
      ++b;
    }
  }

  list.reverse.resize(list.indices.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t b = list.offsets[i]; b < list.offsets[i + 1]; ++b) {
      const Index j = list.indices[b];
      auto nj = list.neighbors(j);
      auto it = std::lower_bound(nj.begin(), nj.end(), static_cast<Index>(i));
      list.reverse[b] = list.offsets[j] + static_cast<std::size_t>(it - nj.begin());
    }
  return list;
}

WeightedVolume weighted_volume(const ParticleSet& particles, const NeighborList& neighbors,
                               const Influence& influence)
{
  const std::size_t n = particles.size();
  WeightedVolume out;
  out.m.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double m = 0.0;
    for (std::size_t b = neighbors.offsets[i]; b < neighbors.offsets[i + 1]; ++b) {
      const double r = neighbors.bond_length[b];
      m += influence(r) * r * r * particles.volumes[neighbors.indices[b]];
    }
    out.m[i] = m;
    if (neighbors.count(i) == 0)
      out.isolated.push_back(static_cast<Index>(i));
  }
  return out;
}

} // namespace pdpore
