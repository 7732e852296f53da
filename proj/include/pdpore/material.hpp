#pragma once

#include "pdpore/common.hpp"
#include "pdpore/discretization.hpp"
#include "pdpore/influence.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace pdpore {

/// Linear peridynamic solid moduli. beta = 15 mu / m is derived per
/// particle from the weighted volume and never stored here.
struct MaterialParams
{
  double bulk_modulus = 0.0;
  double shear_modulus = 0.0;

  void validate() const;
  /// Classical moduli the material corresponds to.
  double youngs_modulus() const { return 9.0 * bulk_modulus * shear_modulus / (3.0 * bulk_modulus + shear_modulus); }
  double poisson_ratio() const
  {
    return (3.0 * bulk_modulus - 2.0 * shear_modulus) / (2.0 * (3.0 * bulk_modulus + shear_modulus));
  }

  bool operator==(const MaterialParams&) const = default;
};

/// How strongly pore pressure enters the peridynamic pressure.
struct EffectiveStressParams
{
  enum class Mode
  {
    unit,     ///< gamma = 1 (Terzaghi)
    biot,     ///< gamma = 1 - K / K_solid
    explicit_ ///< gamma given directly
  };

  Mode mode = Mode::unit;
  double drained_bulk_modulus = 0.0;
  double solid_bulk_modulus = 0.0;
  double gamma = 1.0;

  double resolve() const;

  bool operator==(const EffectiveStressParams&) const = default;
};

std::string_view to_string(EffectiveStressParams::Mode mode);

/// gamma = 1 - K / K_solid. Throws ConfigError if K > K_solid.
double biot_coefficient(double drained_bulk_modulus, double solid_bulk_modulus);

// Bond-level kernels shared by the array operations and the solver.

inline double deviatoric_extension(double extension, double dilatation, double bond_length)
{
  return extension - dilatation * bond_length / 3.0;
}

inline double pressure(double dilatation, double pore_pressure, double bulk_modulus, double gamma)
{
  return -bulk_modulus * dilatation + gamma * pore_pressure;
}

/// t = (-3p/m) omega |xi| + beta omega e^d,  beta = 15 mu / m
inline double force_scalar(double omega, double bond_length, double extension, double dilatation,
                           double pressure, double weighted_volume, double shear_modulus)
{
  const double beta = 15.0 * shear_modulus / weighted_volume;
  return -3.0 * pressure / weighted_volume * omega * bond_length +
         beta * omega * deviatoric_extension(extension, dilatation, bond_length);
}

/// Per-bond kinematics of the current configuration.
struct ExtensionState
{
  std::vector<double> extension; ///< e = |Y| - |xi|
  std::vector<Vec3> direction;   ///< M = Y / |Y|
};

/// Scalar and vector states for one configuration, aligned with the
/// neighbour list (per-bond) or the particle set (per-particle).
struct StateField
{
  std::vector<double> extension;
  std::vector<Vec3> direction;
  std::vector<double> dilatation;
  std::vector<double> pressure;
  std::vector<double> force_scalar;
  std::vector<Vec3> force_vector;

  /// e^d for bond b of particle i, derived from (e, theta).
  double deviatoric(const NeighborList& neighbors, std::size_t i, std::size_t b) const
  {
    return deviatoric_extension(extension[b], dilatation[i], neighbors.bond_length[b]);
  }
};

ExtensionState extension_state(const ParticleSet& particles, std::span<const Vec3> displacements,
                               const NeighborList& neighbors);

/// theta_i = (3/m_i) sum_j omega |xi| e dV_j. Particles without bonds get 0.
std::vector<double> dilatation(const ParticleSet& particles, const NeighborList& neighbors,
                               std::span<const double> extension, std::span<const double> weighted_volume,
                               const Influence& influence);

/// p = -k theta + gamma p_f
std::vector<double> peridynamic_pressure(std::span<const double> dilatation, std::span<const double> pore_pressure,
                                         const MaterialParams& params, double gamma);

std::vector<double> force_scalar_state(const NeighborList& neighbors, std::span<const double> dilatation,
                                       std::span<const double> extension, std::span<const double> pressure,
                                       std::span<const double> weighted_volume, const MaterialParams& params,
                                       const Influence& influence);

/// T = t M
std::vector<Vec3> force_vector_state(std::span<const double> force_scalar, std::span<const Vec3> direction);

/// Evaluates every state for a displacement and pore-pressure field.
StateField evaluate_states(const ParticleSet& particles, const NeighborList& neighbors,
                           std::span<const double> weighted_volume, const Influence& influence,
                           const MaterialParams& params, double gamma, std::span<const Vec3> displacements,
                           std::span<const double> pore_pressure);

} // namespace pdpore
