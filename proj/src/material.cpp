#include "pdpore/material.hpp"

#include <cmath>

namespace pdpore {

std::string_view to_string(Influence::Kind kind)
{
  return kind == Influence::Kind::inverse_distance ? "inverse_distance" : "unit";
}

Influence::Kind influence_kind_from_string(std::string_view name)
{
  if (name == "unit")
    return Influence::Kind::unit;
  if (name == "inverse_distance")
    return Influence::Kind::inverse_distance;
  throw ConfigError("influence", "unknown influence function '" + std::string(name) + "'");
}

void MaterialParams::validate() const
{
  if (!(bulk_modulus > 0.0) || !std::isfinite(bulk_modulus))
    throw ConfigError("material.bulk_modulus", "bulk modulus must be positive");
  if (!(shear_modulus > 0.0) || !std::isfinite(shear_modulus))
    throw ConfigError("material.shear_modulus", "shear modulus must be positive");
}

std::string_view to_string(EffectiveStressParams::Mode mode)
{
  switch (mode) {
  case EffectiveStressParams::Mode::unit:
    return "unit";
  case EffectiveStressParams::Mode::biot:
    return "biot";
  case EffectiveStressParams::Mode::explicit_:
    return "explicit";
  }
  return "unit";
}

double biot_coefficient(double drained_bulk_modulus, double solid_bulk_modulus)
{
  if (!(solid_bulk_modulus > 0.0))
    throw ConfigError("effective_stress.solid_bulk_modulus", "solid bulk modulus must be positive");
  if (!(drained_bulk_modulus >= 0.0))
    throw ConfigError("effective_stress.drained_bulk_modulus", "drained bulk modulus must be non-negative");
  if (drained_bulk_modulus > solid_bulk_modulus)
    throw ConfigError("effective_stress",
                      "gamma = 1 - K/K_solid must lie in [0, 1]; K exceeds K_solid and gamma would be negative");
  return 1.0 - drained_bulk_modulus / solid_bulk_modulus;
}

double EffectiveStressParams::resolve() const
{
  switch (mode) {
  case Mode::unit:
    return 1.0;
  case Mode::biot:
    return biot_coefficient(drained_bulk_modulus, solid_bulk_modulus);
  case Mode::explicit_:
    if (!(gamma >= 0.0 && gamma <= 1.0))
      throw ConfigError("effective_stress.gamma", "gamma must lie in [0, 1]");
    return gamma;
  }
  return 1.0;
}

ExtensionState extension_state(const ParticleSet& particles, std::span<const Vec3> displacements,
                               const NeighborList& neighbors)
{
  const std::size_t n = particles.size();
  ExtensionState out;
  out.extension.resize(neighbors.bond_count());
  out.direction.resize(neighbors.bond_count());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t b = neighbors.offsets[i]; b < neighbors.offsets[i + 1]; ++b) {
      const Index j = neighbors.indices[b];
      const Vec3 xi = particles.positions[j] - particles.positions[i];
      const Vec3 eta = displacements[j] - displacements[i];
      const Vec3 Y = xi + eta;
      const double y = Y.norm();
      if (!(y > 0.0))
        throw SingularBondError(static_cast<Index>(i), j);
      // |Y| - |xi| without cancellation for small eta
      out.extension[b] = eta.dot(xi + Y) / (y + neighbors.bond_length[b]);
      out.direction[b] = Y / y;
    }
  }
  return out;
}

std::vector<double> dilatation(const ParticleSet& particles, const NeighborList& neighbors,
                               std::span<const double> extension, std::span<const double> weighted_volume,
                               const Influence& influence)
{
  const std::size_t n = particles.size();
  std::vector<double> theta(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (neighbors.count(i) == 0 || weighted_volume[i] <= 0.0)
      continue;
    double sum = 0.0;
    for (std::size_t b = neighbors.offsets[i]; b < neighbors.offsets[i + 1]; ++b) {
      const double r = neighbors.bond_length[b];
      sum += influence(r) * r * extension[b] * particles.volumes[neighbors.indices[b]];
    }
    theta[i] = 3.0 * sum / weighted_volume[i];
  }
  return theta;
}

std::vector<double> peridynamic_pressure(std::span<const double> dilatation, std::span<const double> pore_pressure,
                                         const MaterialParams& params, double gamma)
{
  std::vector<double> p(dilatation.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    p[i] = pressure(dilatation[i], pore_pressure.empty() ? 0.0 : pore_pressure[i], params.bulk_modulus, gamma);
  return p;
}

std::vector<double> force_scalar_state(const NeighborList& neighbors, std::span<const double> dilatation,
                                       std::span<const double> extension, std::span<const double> pressure,
                                       std::span<const double> weighted_volume, const MaterialParams& params,
                                       const Influence& influence)
{
  std::vector<double> t(neighbors.bond_count(), 0.0);
  const std::size_t n = neighbors.particle_count();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t b = neighbors.offsets[i]; b < neighbors.offsets[i + 1]; ++b) {
      const double r = neighbors.bond_length[b];
      t[b] = force_scalar(influence(r), r, extension[b], dilatation[i], pressure[i], weighted_volume[i],
                          params.shear_modulus);
    }
  return t;
}

std::vector<Vec3> force_vector_state(std::span<const double> force_scalar, std::span<const Vec3> direction)
{
  std::vector<Vec3> T(force_scalar.size());
  for (std::size_t b = 0; b < T.size(); ++b)
    T[b] = force_scalar[b] * direction[b];
  return T;
}

StateField evaluate_states(const ParticleSet& particles, const NeighborList& neighbors,
                           std::span<const double> weighted_volume, const Influence& influence,
                           const MaterialParams& params, double gamma, std::span<const Vec3> displacements,
                           std::span<const double> pore_pressure)
{
  StateField s;
  auto kin = extension_state(particles, displacements, neighbors);
  s.extension = std::move(kin.extension);
  s.direction = std::move(kin.direction);
  s.dilatation = dilatation(particles, neighbors, s.extension, weighted_volume, influence);
  s.pressure = peridynamic_pressure(s.dilatation, pore_pressure, params, gamma);
  s.force_scalar =
    force_scalar_state(neighbors, s.dilatation, s.extension, s.pressure, weighted_volume, params, influence);
  s.force_vector = force_vector_state(s.force_scalar, s.direction);
  return s;
}

} // namespace pdpore
