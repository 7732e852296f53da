#pragma once

#include "pdpore/simulation.hpp"

#include <random>
#include <set>
#include <utility>
#include <vector>

namespace pdtest {

using pdpore::Vec3;

/// All pairs (i, j), i != j, with |xj - xi| <= horizon (closed ball, with the
/// library's 1e-12 relative tie slack), by direct scan.
inline std::set<std::pair<pdpore::Index, pdpore::Index>> brute_force_pairs(const std::vector<Vec3>& x, double horizon)
{
  std::set<std::pair<pdpore::Index, pdpore::Index>> out;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (i != j && (x[j] - x[i]).norm() <= horizon * (1.0 + 1e-12))
        out.emplace(static_cast<pdpore::Index>(i), static_cast<pdpore::Index>(j));
  return out;
}

inline std::set<std::pair<pdpore::Index, pdpore::Index>> listed_pairs(const pdpore::NeighborList& nl)
{
  std::set<std::pair<pdpore::Index, pdpore::Index>> out;
  for (std::size_t i = 0; i < nl.particle_count(); ++i)
    for (auto j : nl.neighbors(i))
      out.emplace(static_cast<pdpore::Index>(i), j);
  return out;
}

inline std::vector<Vec3> random_field(std::size_t n, double scale, std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> d(-scale, scale);
  std::vector<Vec3> out(n);
  for (auto& v : out)
    v = Vec3(d(rng), d(rng), d(rng));
  return out;
}

inline std::vector<double> flatten(const std::vector<Vec3>& v)
{
  std::vector<double> out;
  for (const auto& x : v)
    out.insert(out.end(), {x[0], x[1], x[2]});
  return out;
}

/// Direct LPS force density from the textbook definitions, bond by bond,
/// without any of the library's state arrays.
inline std::vector<Vec3> oracle_internal_force(const pdpore::ParticleSet& p, double horizon, double k, double mu,
                                               double gamma, const std::vector<Vec3>& u, const std::vector<double>& pf)
{
  const std::size_t n = p.size();
  std::vector<double> m(n, 0.0), theta(n, 0.0);
  auto family = [&](std::size_t i, auto&& f) {
    for (std::size_t j = 0; j < n; ++j) {
      const Vec3 xi = p.positions[j] - p.positions[i];
      if (j != i && xi.norm() <= horizon * (1.0 + 1e-12))
        f(j, xi);
    }
  };
  for (std::size_t i = 0; i < n; ++i)
    family(i, [&](std::size_t j, const Vec3& xi) { m[i] += xi.squaredNorm() * p.volumes[j]; });
  for (std::size_t i = 0; i < n; ++i)
    family(i, [&](std::size_t j, const Vec3& xi) {
      const double e = (xi + u[j] - u[i]).norm() - xi.norm();
      theta[i] += 3.0 / m[i] * xi.norm() * e * p.volumes[j];
    });
  auto T = [&](std::size_t i, std::size_t j) {
    const Vec3 xi = p.positions[j] - p.positions[i];
    const Vec3 y = xi + u[j] - u[i];
    const double e = y.norm() - xi.norm();
    const double press = -k * theta[i] + gamma * (pf.empty() ? 0.0 : pf[i]);
    const double ed = e - theta[i] * xi.norm() / 3.0;
    const double t = -3.0 * press / m[i] * xi.norm() + 15.0 * mu / m[i] * ed;
    return Vec3(t * y / y.norm());
  };
  std::vector<Vec3> f(n, Vec3::Zero());
  for (std::size_t i = 0; i < n; ++i)
    family(i, [&](std::size_t j, const Vec3&) { f[i] += (T(i, j) - T(j, i)) * p.volumes[j]; });
  return f;
}

} // namespace pdtest
