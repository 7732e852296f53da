#include "pdpore/problem.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pdpore {

namespace {

template <class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};

void check_axis(int axis, const std::string& key)
{
  if (axis < 0 || axis > 2)
    throw ConfigError(key, "axis must be 0, 1 or 2");
}

void validate_selector(const TagSelector& selector, const std::string& key)
{
  std::visit(overloaded{
               [](const SelectAll&) {},
               [&](const SelectBox& s) {
                 for (int a = 0; a < 3; ++a)
                   if (s.hi[a] < s.lo[a])
                     throw ConfigError(key + ".hi", "box upper corner below lower corner");
               },
               [&](const SelectLayer& s) {
                 check_axis(s.axis, key + ".axis");
                 if (s.layers < 1)
                   throw ConfigError(key + ".layers", "at least one layer is required");
               },
               [&](const SelectNearest& s) {
                 if (s.count < 1)
                   throw ConfigError(key + ".count", "count must be at least 1");
               },
               [&](const SelectShell& s) {
                 check_axis(s.axis, key + ".axis");
                 if (!(s.r_min >= 0.0 && s.r_max > s.r_min))
                   throw ConfigError(key + ".r_max", "shell needs 0 <= r_min < r_max");
               },
             },
             selector);
}

double radial_distance(const Vec3& x, const Vec3& origin, int axis)
{
  Vec3 d = x - origin;
  d[axis] = 0.0;
  return d.norm();
}

} // namespace

double ProblemSpec::horizon_length() const
{
  return horizon.kind == HorizonSpec::Kind::ratio ? horizon.value * lattice.spacing.maxCoeff() : horizon.value;
}

void ProblemSpec::validate() const
{
  lattice.validate();
  if (!(horizon.value > 0.0) || !std::isfinite(horizon.value))
    throw ConfigError("horizon", "horizon must be positive");
  material.validate();
  effective_stress.resolve();
  if (pressure_field)
    validate_pressure(*pressure_field, "pressure_field");
  validate_body_force(body_force, "body_force");

  std::set<std::string> defined;
  for (std::size_t k = 0; k < tags.size(); ++k) {
    const auto& tag = tags[k];
    const std::string key = "tags[" + std::to_string(k) + "]";
    if (tag.name.empty())
      throw ConfigError(key + ".name", "tag name must not be empty");
    if (defined.count(tag.name))
      throw ConfigError(key + ".name", "duplicate tag '" + tag.name + "'");
    for (const auto& other : tag.within)
      if (!defined.count(other))
        throw ConfigError(key + ".within", "tag '" + other + "' is not defined earlier");
    for (const auto& other : tag.exclude)
      if (!defined.count(other))
        throw ConfigError(key + ".exclude", "tag '" + other + "' is not defined earlier");
    validate_selector(tag.selector, key + ".selector");
    defined.insert(tag.name);
  }
  if (defined.size() > max_tags)
    throw ConfigError("tags", "at most " + std::to_string(max_tags) + " tags are supported");

  for (std::size_t k = 0; k < bcs.fixed.size(); ++k) {
    const std::string key = "boundary_conditions.fixed[" + std::to_string(k) + "]";
    if (!defined.count(bcs.fixed[k].tag))
      throw ConfigError(key + ".tag", "unknown tag '" + bcs.fixed[k].tag + "'");
    check_axis(bcs.fixed[k].axis, key + ".axis");
    if (!std::isfinite(bcs.fixed[k].value))
      throw ConfigError(key + ".value", "value must be finite");
  }
  for (std::size_t k = 0; k < bcs.loads.size(); ++k) {
    const auto& load = bcs.loads[k];
    const std::string key = "boundary_conditions.loads[" + std::to_string(k) + "]";
    if (!defined.count(load.tag))
      throw ConfigError(key + ".tag", "unknown tag '" + load.tag + "'");
    if (load.kind == PointLoad::Kind::radial)
      check_axis(load.axis, key + ".axis");
    if (!load.total.allFinite() || !std::isfinite(load.magnitude))
      throw ConfigError(key, "load must be finite");
    validate_scale(load.scale, key + ".scale");
  }
  schedule.validate();
  solver.validate();
}

std::size_t apply_tag(ParticleSet& particles, const TagDefinition& tag)
{
  std::vector<int> within, exclude;
  for (const auto& name : tag.within) {
    const int bit = particles.tag_index(name);
    if (bit < 0)
      throw ConfigError("tags." + tag.name + ".within", "unknown tag '" + name + "'");
    within.push_back(bit);
  }
  for (const auto& name : tag.exclude) {
    const int bit = particles.tag_index(name);
    if (bit < 0)
      throw ConfigError("tags." + tag.name + ".exclude", "unknown tag '" + name + "'");
    exclude.push_back(bit);
  }

  std::vector<Index> candidates;
  for (std::size_t i = 0; i < particles.size(); ++i) {
    const bool ok = std::all_of(within.begin(), within.end(), [&](int b) { return particles.has_tag(i, b); }) &&
                    std::none_of(exclude.begin(), exclude.end(), [&](int b) { return particles.has_tag(i, b); });
    if (ok)
      candidates.push_back(static_cast<Index>(i));
  }

  const auto& x = particles.positions;
  std::vector<Index> chosen;
  std::visit(overloaded{
               [&](const SelectAll&) { chosen = candidates; },
               [&](const SelectBox& s) {
                 for (Index i : candidates)
                   if ((x[i].array() >= s.lo.array()).all() && (x[i].array() <= s.hi.array()).all())
                     chosen.push_back(i);
               },
               [&](const SelectLayer& s) {
                 if (candidates.empty())
                   return;
                 double extreme = x[candidates.front()][s.axis];
                 for (Index i : candidates)
                   extreme = s.side == SelectLayer::Side::low ? std::min(extreme, x[i][s.axis])
                                                              : std::max(extreme, x[i][s.axis]);
                 const double depth = (s.layers - 0.5) * particles.spacing[s.axis];
                 for (Index i : candidates) {
                   const double d = std::abs(x[i][s.axis] - extreme);
                   if (d <= depth || d == 0.0)
                     chosen.push_back(i);
                 }
               },
               [&](const SelectNearest& s) {
                 std::vector<std::pair<double, Index>> order;
                 order.reserve(candidates.size());
                 for (Index i : candidates)
                   order.emplace_back((x[i] - s.point).norm(), i);
                 const auto n = std::min<std::size_t>(order.size(), static_cast<std::size_t>(s.count));
                 std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end());
                 for (std::size_t k = 0; k < n; ++k)
                   chosen.push_back(order[k].second);
               },
               [&](const SelectShell& s) {
                 for (Index i : candidates) {
                   const double r = radial_distance(x[i], s.origin, s.axis);
                   if (r >= s.r_min && r < s.r_max)
                     chosen.push_back(i);
                 }
               },
             },
             tag.selector);

  const int bit = particles.add_tag(tag.name);
  for (Index i : chosen)
    particles.tags[i] |= TagMask{1} << bit;
  return chosen.size();
}

ParticleSet build_particles(const ProblemSpec& spec)
{
  ParticleSet particles = build_lattice(spec.lattice);
  for (const auto& tag : spec.tags)
    apply_tag(particles, tag);
  return particles;
}

} // namespace pdpore
