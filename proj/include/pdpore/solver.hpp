#pragma once

#include "pdpore/common.hpp"
#include "pdpore/discretization.hpp"
#include "pdpore/fields.hpp"
#include "pdpore/material.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pdpore {

enum class Linearization
{
  reference_direction, ///< bond directions frozen at xi/|xi|; linear, symmetric
  fixed_point_M        ///< directions re-frozen from the previous iterate until they settle
};

std::string_view to_string(Linearization mode);
Linearization linearization_from_string(std::string_view name);

struct SolverConfig
{
  double residual_tolerance = 1e-8;
  /// Krylov iterations per linear solve.
  int max_iterations = 100000;
  /// Direction updates for fixed_point_M.
  int max_fixed_point_iterations = 50;
  Linearization linearization = Linearization::reference_direction;

  void validate() const;
  bool operator==(const SolverConfig&) const = default;
};

/// Prescribed displacement component for every particle carrying `tag`.
struct FixedDisplacement
{
  std::string tag;
  int axis = 0;
  double value = 0.0;
  bool operator==(const FixedDisplacement&) const = default;
};

/// Force shared equally by the particles carrying `tag`, scaled by
/// `scale(t)`. A directional load applies `total`; a radial load applies
/// |F| = `magnitude` split equally, each share pointing away from the line
/// parallel to `axis` through `origin`.
struct PointLoad
{
  enum class Kind
  {
    directional,
    radial
  };

  std::string tag;
  Kind kind = Kind::directional;
  Vec3 total = Vec3::Zero();
  double magnitude = 0.0;
  int axis = 2;
  Vec3 origin = Vec3::Zero();
  ScaleFunction scale = ConstantScale{};

  bool operator==(const PointLoad&) const = default;
};

struct BoundaryConditions
{
  std::vector<FixedDisplacement> fixed;
  std::vector<PointLoad> loads;
  bool operator==(const BoundaryConditions&) const = default;
};

/// Per-dof constraint state (dof = 3 * particle + axis).
struct Constraints
{
  std::vector<std::uint8_t> fixed;
  std::vector<double> value;

  std::size_t fixed_count() const;
  bool is_fixed(std::size_t dof) const { return fixed[dof] != 0; }
};

struct ResolvedLoad
{
  std::vector<Index> particles;
  std::vector<Vec3> forces;
  ScaleFunction scale = ConstantScale{};
};

/// Resolves tags to dofs. Throws ConfigError for unknown tags, one dof with
/// two different prescribed values, or a dof that is both fixed and loaded.
Constraints resolve_constraints(const ParticleSet& particles, const BoundaryConditions& bcs,
                                std::vector<ResolvedLoad>* loads = nullptr);

/// Writes the prescribed values into the fixed dofs of `u`.
void apply_bcs(std::span<Vec3> u, const Constraints& constraints);

/// Everything the equilibrium solve needs, resolved against one
/// discretization.
struct Model
{
  ParticleSet particles;
  NeighborList neighbors;
  Influence influence;
  std::vector<double> weighted_volume;
  MaterialParams material;
  double gamma = 1.0;
  Constraints constraints;
  std::vector<ResolvedLoad> loads;
  std::optional<PorePressureField> pore_pressure;
  BodyForceField body_force = ConstantBodyForce{};

  std::size_t dofs() const { return 3 * particles.size(); }
  std::vector<double> pore_pressure_at(double t) const;
  /// Body force times cell volume plus point loads, per dof.
  std::vector<double> external_force(double t) const;
};

/// Checks that every particle with m = 0 is fully fixed and that the
/// displacement constraints remove every rigid-body mode of every connected
/// body. Throws SolverError otherwise.
void check_constraints(const Model& model);

/// f_i = sum_j { T_i<xj - xi> - T_j<xi - xj> } dV_j  (force per unit volume)
std::vector<Vec3> internal_force(const ParticleSet& particles, const NeighborList& neighbors,
                                 std::span<const Vec3> force_vector_state);

/// Full nonlinear internal force density of `model` at displacement `u`.
std::vector<Vec3> internal_force(const Model& model, std::span<const Vec3> u, std::span<const double> pore_pressure);

/// Directional derivative d f_int / du [v] of the nonlinear internal force,
/// including the geometric (direction-rotation) term.
std::vector<Vec3> internal_force_derivative(const Model& model, std::span<const Vec3> u, std::span<const Vec3> v,
                                            std::span<const double> pore_pressure);

struct Residual
{
  std::vector<double> values; ///< per dof, zero on fixed dofs
  double norm = 0.0;          ///< ||values|| / ||load|| (absolute when the load vanishes)
  double load_norm = 0.0;
};

/// r = dV f_int + dV b + point loads on free dofs. `load_norm` is taken from
/// the equivalent applied load: external forces plus the pore-pressure
/// forces of the undeformed configuration.
Residual residual(const Model& model, std::span<const Vec3> f_int, std::span<const double> external,
                  std::span<const double> pore_pressure_load = {});

/// Internal forces of the linearized model over bond pairs i < j, in force
/// units (dV_i f_i). Directions are either the reference directions or
/// frozen from a deformed configuration, with e = e0 + M . (u_j - u_i).
class LinearizedLps
{
public:
  explicit LinearizedLps(const Model& model);

  void freeze_reference_directions();
  void freeze_directions(std::span<const Vec3> u);

  /// dV_i f_int,i for displacement u and pore pressure pf (pf may be empty).
  void force(std::span<const double> u, std::span<const double> pf, std::span<double> out) const;
  /// K v = -dV f_int(v) with no offsets and no pore pressure.
  void apply_stiffness(std::span<const double> v, std::span<double> out) const;
  /// Dilatation of the linearized model at displacement u.
  std::vector<double> dilatation(std::span<const double> u) const;
  /// Exact diagonal of K.
  std::vector<double> diagonal() const;

  std::size_t pair_count() const { return pairs_.size(); }

private:
  struct Pair
  {
    Index i, j;
    double length;
    double omega;
    double vol_i, vol_j;
    Vec3 direction;
    double offset;
  };

  void evaluate(std::span<const double> u, std::span<const double> pf, bool homogeneous,
                std::span<double> out) const;

  const Model* model_;
  std::vector<Pair> pairs_;
  mutable std::vector<double> extension_;
  mutable std::vector<double> theta_;
  mutable std::vector<double> a_, b_;
};

struct SolutionState
{
  std::vector<Vec3> displacements;
  bool converged = false;
  int iterations = 0;
  double residual_norm = 0.0;
  std::vector<double> residual_history;
  std::string message;
};

struct KrylovResult
{
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  std::vector<double> history;
};

/// Jacobi-preconditioned conjugate gradients on the free dofs of `op`.
/// Solves K x = b (fixed dofs of b and x are ignored/kept at zero). Convergence
/// is judged on the true residual, relative to `reference_norm`.
KrylovResult conjugate_gradient(const LinearizedLps& op, const Constraints& constraints,
                                std::span<const double> diagonal, std::span<const double> rhs,
                                std::span<double> x, double tolerance, double reference_norm, int max_iterations);

} // namespace pdpore
