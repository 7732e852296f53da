#include "pdpore/solver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pdpore {

namespace {

double dot(std::span<const double> a, std::span<const double> b)
{
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    s += a[k] * b[k];
  return s;
}

struct DisjointSets
{
  std::vector<Index> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), Index{0}); }
  Index find(Index i)
  {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }
  void unite(Index a, Index b)
  {
    a = find(a);
    b = find(b);
    if (a != b)
      parent[std::max(a, b)] = std::min(a, b);
  }
};

} // namespace

std::string_view to_string(Linearization mode)
{
  return mode == Linearization::fixed_point_M ? "fixed_point_M" : "reference_direction";
}

Linearization linearization_from_string(std::string_view name)
{
  if (name == "reference_direction")
    return Linearization::reference_direction;
  if (name == "fixed_point_M")
    return Linearization::fixed_point_M;
  throw ConfigError("solver.linearization", "expected 'reference_direction' or 'fixed_point_M', got '" +
                                              std::string(name) + "'");
}

void SolverConfig::validate() const
{
  if (!(residual_tolerance > 0.0 && residual_tolerance < 1.0))
    throw ConfigError("solver.residual_tolerance", "tolerance must lie in (0, 1)");
  if (max_iterations < 1)
    throw ConfigError("solver.max_iterations", "at least one iteration is required");
  if (max_fixed_point_iterations < 1)
    throw ConfigError("solver.max_fixed_point_iterations", "at least one iteration is required");
}

std::size_t Constraints::fixed_count() const
{
  return static_cast<std::size_t>(std::count_if(fixed.begin(), fixed.end(), [](auto f) { return f != 0; }));
}

Constraints resolve_constraints(const ParticleSet& particles, const BoundaryConditions& bcs,
                                std::vector<ResolvedLoad>* loads)
{
  const std::size_t n = particles.size();
  Constraints c;
  c.fixed.assign(3 * n, 0);
  c.value.assign(3 * n, 0.0);

  for (std::size_t k = 0; k < bcs.fixed.size(); ++k) {
    const auto& fd = bcs.fixed[k];
    const std::string key = "boundary_conditions.fixed[" + std::to_string(k) + "]";
    const int bit = particles.tag_index(fd.tag);
    if (bit < 0)
      throw ConfigError(key + ".tag", "unknown tag '" + fd.tag + "'");
    if (fd.axis < 0 || fd.axis > 2)
      throw ConfigError(key + ".axis", "axis must be 0, 1 or 2");
    for (Index p : particles.tagged(bit)) {
      const std::size_t dof = 3 * p + static_cast<std::size_t>(fd.axis);
      if (c.fixed[dof] && c.value[dof] != fd.value)
        throw ConfigError(key, "conflicting prescribed values on particle " + std::to_string(p) + " axis " +
                                 std::to_string(fd.axis));
      c.fixed[dof] = 1;
      c.value[dof] = fd.value;
    }
  }

  std::vector<ResolvedLoad> resolved;
  for (std::size_t k = 0; k < bcs.loads.size(); ++k) {
    const auto& load = bcs.loads[k];
    const std::string key = "boundary_conditions.loads[" + std::to_string(k) + "]";
    const int bit = particles.tag_index(load.tag);
    if (bit < 0)
      throw ConfigError(key + ".tag", "unknown tag '" + load.tag + "'");
    ResolvedLoad r;
    r.particles = particles.tagged(bit);
    r.scale = load.scale;
    if (r.particles.empty())
      throw ConfigError(key + ".tag", "tag '" + load.tag + "' selects no particles");
    const double share = 1.0 / static_cast<double>(r.particles.size());
    for (Index p : r.particles) {
      Vec3 f;
      if (load.kind == PointLoad::Kind::directional) {
        f = load.total * share;
      }
      else {
        Vec3 d = particles.positions[p] - load.origin;
        d[load.axis] = 0.0;
        if (!(d.norm() > 0.0))
          throw ConfigError(key, "radial load on a particle that lies on the load axis");
        f = load.magnitude * share * d.normalized();
      }
      for (int a = 0; a < 3; ++a)
        if (c.fixed[3 * p + a] && std::abs(f[a]) > 1e-12 * f.norm())
          throw ConfigError(key, "particle " + std::to_string(p) + " axis " + std::to_string(a) +
                                   " is both fixed and loaded");
      r.forces.push_back(f);
    }
    resolved.push_back(std::move(r));
  }
  if (loads)
    *loads = std::move(resolved);
  return c;
}

void apply_bcs(std::span<Vec3> u, const Constraints& constraints)
{
  for (std::size_t p = 0; p < u.size(); ++p)
    for (int a = 0; a < 3; ++a)
      if (constraints.is_fixed(3 * p + a))
        u[p][a] = constraints.value[3 * p + a];
}

std::vector<double> Model::pore_pressure_at(double t) const
{
  std::vector<double> pf(particles.size(), 0.0);
  if (pore_pressure)
    for (std::size_t i = 0; i < pf.size(); ++i)
      pf[i] = evaluate_pressure(*pore_pressure, particles.positions[i], t);
  return pf;
}

std::vector<double> Model::external_force(double t) const
{
  std::vector<double> f(dofs(), 0.0);
  for (std::size_t i = 0; i < particles.size(); ++i) {
    const Vec3 b = evaluate_body_force(body_force, particles.positions[i], t) * particles.volumes[i];
    for (int a = 0; a < 3; ++a)
      f[3 * i + a] += b[a];
  }
  for (const auto& load : loads) {
    const double s = evaluate_scale(load.scale, t);
    for (std::size_t k = 0; k < load.particles.size(); ++k)
      for (int a = 0; a < 3; ++a)
        f[3 * load.particles[k] + a] += s * load.forces[k][a];
  }
  return f;
}

void check_constraints(const Model& model)
{
  const auto& particles = model.particles;
  const auto& nl = model.neighbors;
  const std::size_t n = particles.size();

  for (std::size_t i = 0; i < n; ++i)
    if (model.weighted_volume[i] <= 0.0)
      for (int a = 0; a < 3; ++a)
        if (!model.constraints.is_fixed(3 * i + a))
          throw SolverError("particle " + std::to_string(i) +
                            " has an empty neighbourhood (m = 0) and is not fully constrained; refusing to solve");

  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i)
    for (Index j : nl.neighbors(i))
      sets.unite(static_cast<Index>(i), j);

  std::vector<std::vector<Index>> components;
  std::vector<std::ptrdiff_t> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const Index root = sets.find(static_cast<Index>(i));
    if (slot[root] < 0) {
      slot[root] = static_cast<std::ptrdiff_t>(components.size());
      components.emplace_back();
    }
    components[static_cast<std::size_t>(slot[root])].push_back(static_cast<Index>(i));
  }

  using Mat6 = Eigen::Matrix<double, 6, 6>;
  using Vec6 = Eigen::Matrix<double, 6, 1>;
  for (const auto& comp : components) {
    if (comp.size() < 2)
      continue; // isolated particles were handled above
    Vec3 centroid = Vec3::Zero();
    for (Index p : comp)
      centroid += particles.positions[p];
    centroid /= static_cast<double>(comp.size());
    double scale = 0.0;
    for (Index p : comp)
      scale += (particles.positions[p] - centroid).squaredNorm();
    scale = std::sqrt(scale / static_cast<double>(comp.size()));
    if (!(scale > 0.0))
      scale = 1.0;

    Mat6 all = Mat6::Zero();
    Mat6 fixed = Mat6::Zero();
    for (Index p : comp) {
      const Vec3 r = (particles.positions[p] - centroid) / scale;
      for (int a = 0; a < 3; ++a) {
        Vec6 row = Vec6::Zero();
        row[a] = 1.0;
        for (int k = 0; k < 3; ++k)
          row[3 + k] = Vec3::Unit(k).cross(r)[a];
        all += row * row.transpose();
        if (model.constraints.is_fixed(3 * p + a))
          fixed += row * row.transpose();
      }
    }
    Eigen::SelfAdjointEigenSolver<Mat6> eig_all(all, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Mat6> eig_fixed(fixed, Eigen::EigenvaluesOnly);
    const double threshold = 1e-10 * eig_all.eigenvalues().maxCoeff();
    const auto rank = [threshold](const auto& values) {
      return static_cast<int>((values.array() > threshold).count());
    };
    const int free_modes = rank(eig_all.eigenvalues()) - rank(eig_fixed.eigenvalues());
    if (free_modes > 0)
      throw SolverError("singular operator: the body containing particle " + std::to_string(comp.front()) +
                        " has " + std::to_string(free_modes) +
                        " rigid-body mode(s) not removed by the displacement constraints");
  }
}

std::vector<Vec3> internal_force(const ParticleSet& particles, const NeighborList& neighbors,
                                 std::span<const Vec3> force_vector_state)
{
  const std::size_t n = particles.size();
  std::vector<Vec3> f(n, Vec3::Zero());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(n); ++si) {
    const auto i = static_cast<std::size_t>(si);
    Vec3 sum = Vec3::Zero();
    for (std::size_t b = neighbors.offsets[i]; b < neighbors.offsets[i + 1]; ++b)
      sum += (force_vector_state[b] - force_vector_state[neighbors.reverse[b]]) *
             particles.volumes[neighbors.indices[b]];
    f[i] = sum;
  }
  return f;
}

std::vector<Vec3> internal_force(const Model& model, std::span<const Vec3> u, std::span<const double> pore_pressure)
{
  const auto states = evaluate_states(model.particles, model.neighbors, model.weighted_volume, model.influence,
                                      model.material, model.gamma, u, pore_pressure);
  return internal_force(model.particles, model.neighbors, states.force_vector);
}

std::vector<Vec3> internal_force_derivative(const Model& model, std::span<const Vec3> u, std::span<const Vec3> v,
                                            std::span<const double> pore_pressure)
{
  const auto& particles = model.particles;
  const auto& nl = model.neighbors;
  const std::size_t n = particles.size();
  const auto s = evaluate_states(particles, nl, model.weighted_volume, model.influence, model.material, model.gamma,
                                 u, pore_pressure);

  std::vector<double> de(nl.bond_count());
  std::vector<Vec3> dM(nl.bond_count());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t b = nl.offsets[i]; b < nl.offsets[i + 1]; ++b) {
      const Index j = nl.indices[b];
      const Vec3 dY = v[j] - v[i];
      const Vec3& M = s.direction[b];
      const double y = nl.bond_length[b] + s.extension[b];
      de[b] = M.dot(dY);
      dM[b] = (dY - M * M.dot(dY)) / y;
    }
  const auto dtheta = dilatation(particles, nl, de, model.weighted_volume, model.influence);

  std::vector<Vec3> dT(nl.bond_count());
  for (std::size_t i = 0; i < n; ++i) {
    const double dp = -model.material.bulk_modulus * dtheta[i];
    for (std::size_t b = nl.offsets[i]; b < nl.offsets[i + 1]; ++b) {
      const double r = nl.bond_length[b];
      const double dt = force_scalar(model.influence(r), r, de[b], dtheta[i], dp, model.weighted_volume[i],
                                     model.material.shear_modulus);
      dT[b] = dt * s.direction[b] + s.force_scalar[b] * dM[b];
    }
  }
  return internal_force(particles, nl, dT);
}

Residual residual(const Model& model, std::span<const Vec3> f_int, std::span<const double> external,
                  std::span<const double> pore_pressure_load)
{
  const std::size_t n = model.particles.size();
  Residual r;
  r.values.assign(3 * n, 0.0);
  double load_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (int a = 0; a < 3; ++a) {
      const std::size_t dof = 3 * i + a;
      if (model.constraints.is_fixed(dof))
        continue;
      r.values[dof] = model.particles.volumes[i] * f_int[i][a] + external[dof];
      const double load = external[dof] + (pore_pressure_load.empty() ? 0.0 : pore_pressure_load[dof]);
      load_sq += load * load;
    }
  r.load_norm = std::sqrt(load_sq);
  const double raw = std::sqrt(dot(r.values, r.values));
  r.norm = r.load_norm > 0.0 ? raw / r.load_norm : raw;
  return r;
}

// ---------------------------------------------------------------------------

LinearizedLps::LinearizedLps(const Model& model) : model_(&model)
{
  const auto& nl = model.neighbors;
  const auto& particles = model.particles;
  const std::size_t n = particles.size();
  pairs_.reserve(nl.bond_count() / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t b = nl.offsets[i]; b < nl.offsets[i + 1]; ++b) {
      const Index j = nl.indices[b];
      if (j <= i)
        continue;
      const double r = nl.bond_length[b];
      pairs_.push_back(Pair{static_cast<Index>(i), j, r, model.influence(r), particles.volumes[i],
                            particles.volumes[j], (particles.positions[j] - particles.positions[i]) / r, 0.0});
    }
  extension_.resize(pairs_.size());
  theta_.resize(n);
  a_.resize(n);
  b_.resize(n);
}

void LinearizedLps::freeze_reference_directions()
{
  const auto& x = model_->particles.positions;
  for (auto& p : pairs_) {
    p.direction = (x[p.j] - x[p.i]) / p.length;
    p.offset = 0.0;
  }
}

void LinearizedLps::freeze_directions(std::span<const Vec3> u)
{
  const auto& x = model_->particles.positions;
  for (auto& p : pairs_) {
    const Vec3 xi = x[p.j] - x[p.i];
    const Vec3 Y = xi + u[p.j] - u[p.i];
    const double y = Y.norm();
    if (!(y > 0.0))
      throw SingularBondError(p.i, p.j);
    p.direction = Y / y;
    // e = |Y| - |xi| = M . (xi + du) - |xi|
    p.offset = p.direction.dot(xi) - p.length;
  }
}

void LinearizedLps::evaluate(std::span<const double> u, std::span<const double> pf, bool homogeneous,
                             std::span<double> out) const
{
  const auto& m = model_->weighted_volume;
  const double k = model_->material.bulk_modulus;
  const double mu = model_->material.shear_modulus;
  const double gamma = model_->gamma;
  const std::size_t n = theta_.size();

  std::fill(theta_.begin(), theta_.end(), 0.0);
  for (std::size_t q = 0; q < pairs_.size(); ++q) {
    const Pair& p = pairs_[q];
    const double* ui = &u[3 * p.i];
    const double* uj = &u[3 * p.j];
    double e = p.direction[0] * (uj[0] - ui[0]) + p.direction[1] * (uj[1] - ui[1]) +
               p.direction[2] * (uj[2] - ui[2]);
    if (!homogeneous)
      e += p.offset;
    extension_[q] = e;
    const double w = 3.0 * p.omega * p.length * e;
    theta_[p.i] += w * p.vol_j;
    theta_[p.j] += w * p.vol_i;
  }

  // t_ij = omega/m_i [ ((3k - 5 mu) theta_i - 3 gamma p_f,i) |xi| + 15 mu e ], which is
  // (-3p/m) omega |xi| + beta omega e^d with p = -k theta + gamma p_f.
  const bool with_pf = !homogeneous && !pf.empty();
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i] <= 0.0) {
      theta_[i] = a_[i] = b_[i] = 0.0;
      continue;
    }
    theta_[i] /= m[i];
    const double source = with_pf ? 3.0 * gamma * pf[i] : 0.0;
    a_[i] = ((3.0 * k - 5.0 * mu) * theta_[i] - source) / m[i];
    b_[i] = 15.0 * mu / m[i];
  }

  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t q = 0; q < pairs_.size(); ++q) {
    const Pair& p = pairs_[q];
    const double s = p.omega * ((a_[p.i] + a_[p.j]) * p.length + (b_[p.i] + b_[p.j]) * extension_[q]) * p.vol_i *
                     p.vol_j;
    double* fi = &out[3 * p.i];
    double* fj = &out[3 * p.j];
    for (int a = 0; a < 3; ++a) {
      const double f = s * p.direction[a];
      fi[a] += f;
      fj[a] -= f;
    }
  }
}

void LinearizedLps::force(std::span<const double> u, std::span<const double> pf, std::span<double> out) const
{
  evaluate(u, pf, false, out);
}

void LinearizedLps::apply_stiffness(std::span<const double> v, std::span<double> out) const
{
  evaluate(v, {}, true, out);
  for (double& x : out)
    x = -x;
}

std::vector<double> LinearizedLps::dilatation(std::span<const double> u) const
{
  std::vector<double> scratch(u.size());
  evaluate(u, {}, false, scratch);
  return theta_;
}

std::vector<double> LinearizedLps::diagonal() const
{
  const auto& m = model_->weighted_volume;
  const double k = model_->material.bulk_modulus;
  const double mu = model_->material.shear_modulus;
  const double c = k - 5.0 * mu / 3.0;
  const std::size_t n = theta_.size();

  std::vector<double> diag(3 * n, 0.0);
  std::vector<Vec3> grad(n, Vec3::Zero()); // d theta_i / d u_i
  auto beta = [&](Index i) { return m[i] > 0.0 ? 15.0 * mu / m[i] : 0.0; };
  for (const Pair& p : pairs_) {
    const double ci = 3.0 * p.omega * p.length * p.vol_j / m[p.i];
    const double cj = 3.0 * p.omega * p.length * p.vol_i / m[p.j];
    grad[p.i] -= ci * p.direction;
    grad[p.j] += cj * p.direction;
    const double dev = p.vol_i * p.vol_j * p.omega * (beta(p.i) + beta(p.j));
    for (int a = 0; a < 3; ++a) {
      const double d2 = p.direction[a] * p.direction[a];
      // neighbour dilatations depend on this particle's displacement too
      diag[3 * p.i + a] += dev * d2 + c * p.vol_j * cj * cj * d2;
      diag[3 * p.j + a] += dev * d2 + c * p.vol_i * ci * ci * d2;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (int a = 0; a < 3; ++a)
      diag[3 * i + a] += c * model_->particles.volumes[i] * grad[i][a] * grad[i][a];
  return diag;
}

// ---------------------------------------------------------------------------

KrylovResult conjugate_gradient(const LinearizedLps& op, const Constraints& constraints,
                                std::span<const double> diagonal, std::span<const double> rhs, std::span<double> x,
                                double tolerance, double reference_norm, int max_iterations)
{
  const std::size_t n = rhs.size();
  std::vector<double> r(n), z(n), p(n), q(n), inv_diag(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (constraints.is_fixed(k)) {
      x[k] = 0.0;
      continue;
    }
    inv_diag[k] = diagonal[k] > 0.0 ? 1.0 / diagonal[k] : 1.0;
  }

  auto apply = [&](std::span<const double> v, std::span<double> out) {
    op.apply_stiffness(v, out);
    for (std::size_t k = 0; k < n; ++k)
      if (constraints.is_fixed(k))
        out[k] = 0.0;
  };

  KrylovResult result;
  const double scale = reference_norm > 0.0 ? reference_norm : 1.0;
  const double target = tolerance * scale;

  for (int restart = 0; restart < 8; ++restart) {
    apply(x, q);
    for (std::size_t k = 0; k < n; ++k)
      r[k] = constraints.is_fixed(k) ? 0.0 : rhs[k] - q[k];
    double rnorm = std::sqrt(dot(r, r));
    result.relative_residual = rnorm / scale;
    if (rnorm <= target) {
      result.converged = true;
      return result;
    }
    if (result.iterations >= max_iterations)
      break;

    for (std::size_t k = 0; k < n; ++k)
      z[k] = inv_diag[k] * r[k];
    p = z;
    double rz = dot(r, z);

    while (result.iterations < max_iterations) {
      apply(p, q);
      const double pq = dot(p, q);
      double pdp = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        pdp += p[k] * p[k] * (inv_diag[k] > 0.0 ? 1.0 / inv_diag[k] : 0.0);
      if (!(pq > 1e-14 * pdp))
        throw SolverError("singular operator: zero-energy search direction in the Krylov iteration "
                          "(insufficiently constrained rigid-body modes)");
      const double alpha = rz / pq;
      for (std::size_t k = 0; k < n; ++k) {
        x[k] += alpha * p[k];
        r[k] -= alpha * q[k];
      }
      ++result.iterations;
      rnorm = std::sqrt(dot(r, r));
      result.history.push_back(rnorm / scale);
      if (rnorm <= target)
        break;
      for (std::size_t k = 0; k < n; ++k)
        z[k] = inv_diag[k] * r[k];
      const double rz_new = dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t k = 0; k < n; ++k)
        p[k] = z[k] + beta * p[k];
    }
  }
  // true residual of the final iterate
  apply(x, q);
  for (std::size_t k = 0; k < n; ++k)
    r[k] = constraints.is_fixed(k) ? 0.0 : rhs[k] - q[k];
  result.relative_residual = std::sqrt(dot(r, r)) / scale;
  result.converged = result.relative_residual <= tolerance;
  return result;
}

} // namespace pdpore
