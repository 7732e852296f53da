#include "pdpore/simulation.hpp"

#include <cmath>
#include <limits>

namespace pdpore {

namespace {

constexpr std::size_t max_basis = 8;
constexpr double basis_accuracy = 1e-4;

double dot(const std::vector<double>& a, const std::vector<double>& b)
{
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    s += a[k] * b[k];
  return s;
}

std::vector<Vec3> as_vectors(const std::vector<double>& u)
{
  std::vector<Vec3> out(u.size() / 3);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = Vec3(u[3 * i], u[3 * i + 1], u[3 * i + 2]);
  return out;
}

void mask(std::vector<double>& v, const Constraints& c)
{
  for (std::size_t k = 0; k < v.size(); ++k)
    if (c.is_fixed(k))
      v[k] = 0.0;
}

} // namespace

Model assemble_model(const ProblemSpec& spec)
{
  spec.validate();
  Model m;
  m.particles = build_particles(spec);
  const double horizon = spec.horizon_length();
  m.neighbors = build_neighbors(m.particles, horizon);
  m.influence = Influence{spec.influence, horizon};
  m.weighted_volume = weighted_volume(m.particles, m.neighbors, m.influence).m;
  m.material = spec.material;
  m.gamma = spec.effective_stress.resolve();
  m.constraints = resolve_constraints(m.particles, spec.bcs, &m.loads);
  m.pore_pressure = spec.pressure_field;
  m.body_force = spec.body_force;
  return m;
}

Simulation::Simulation(Model model, SolverConfig config)
  : model_(std::move(model)), config_(config), reference_(model_)
{
  config_.validate();
  check_constraints(model_);
  diagonal_ = reference_.diagonal();
}

StepResult Simulation::solve(double t)
{
  return config_.linearization == Linearization::reference_direction ? solve_linear(t) : solve_fixed_point(t);
}

std::vector<double> Simulation::prescribed() const
{
  std::vector<double> u(model_.dofs(), 0.0);
  for (std::size_t k = 0; k < u.size(); ++k)
    if (model_.constraints.is_fixed(k))
      u[k] = model_.constraints.value[k];
  return u;
}

std::vector<double> Simulation::galerkin_guess(const std::vector<double>& rhs) const
{
  std::vector<double> x(rhs.size(), 0.0);
  for (const auto& w : basis_) {
    const double c = dot(w, rhs);
    for (std::size_t k = 0; k < x.size(); ++k)
      x[k] += c * w[k];
  }
  return x;
}

void Simulation::remember(const std::vector<double>& x, const std::vector<double>& rhs)
{
  std::vector<double> v = x;
  for (std::size_t b = 0; b < basis_.size(); ++b) {
    const double c = dot(basis_image_[b], v);
    for (std::size_t k = 0; k < v.size(); ++k)
      v[k] -= c * basis_[b][k];
  }
  std::vector<double> kv(v.size());
  reference_.apply_stiffness(v, kv);
  mask(kv, model_.constraints);
  const double energy = dot(v, kv);
  if (!(energy > 1e-14 * std::abs(dot(x, rhs))))
    return;
  const double inv = 1.0 / std::sqrt(energy);
  for (std::size_t k = 0; k < v.size(); ++k) {
    v[k] *= inv;
    kv[k] *= inv;
  }
  if (basis_.size() == max_basis) {
    basis_.erase(basis_.begin());
    basis_image_.erase(basis_image_.begin());
  }
  basis_.push_back(std::move(v));
  basis_image_.push_back(std::move(kv));
}

void Simulation::finish(StepResult& step, const std::vector<double>& u, std::vector<double> theta,
                        const std::vector<double>& pf) const
{
  step.solution.displacements = as_vectors(u);
  step.dilatation = std::move(theta);
  step.pressure.resize(step.dilatation.size());
  for (std::size_t i = 0; i < step.pressure.size(); ++i)
    step.pressure[i] = pressure(step.dilatation[i], pf[i], model_.material.bulk_modulus, model_.gamma);
  step.pore_pressure = pf;
}

StepResult Simulation::solve_linear(double t)
{
  StepResult step;
  step.time = t;
  const auto pf = model_.pore_pressure_at(t);
  const auto ext = model_.external_force(t);
  const auto u_fixed = prescribed();

  std::vector<double> rhs(model_.dofs());
  reference_.force(u_fixed, pf, rhs);
  for (std::size_t k = 0; k < rhs.size(); ++k)
    rhs[k] += ext[k];
  mask(rhs, model_.constraints);
  const double reference_norm = std::sqrt(dot(rhs, rhs));

  auto x = galerkin_guess(rhs);
  auto kr = conjugate_gradient(reference_, model_.constraints, diagonal_, rhs, x, config_.residual_tolerance,
                               reference_norm, config_.max_iterations);
  // A step the basis could not already represent adds a new basis vector.
  // Those are solved more tightly, since their errors are amplified when
  // later steps are projected onto them.
  if (kr.converged && kr.iterations > 0 && basis_.size() < max_basis) {
    auto tight = conjugate_gradient(reference_, model_.constraints, diagonal_, rhs, x,
                                    config_.residual_tolerance * basis_accuracy, reference_norm,
                                    std::max(1, config_.max_iterations - kr.iterations));
    tight.iterations += kr.iterations;
    tight.history.insert(tight.history.begin(), kr.history.begin(), kr.history.end());
    tight.converged = tight.relative_residual <= config_.residual_tolerance;
    kr = std::move(tight);
  }
  auto& sol = step.solution;
  sol.converged = kr.converged;
  sol.iterations = kr.iterations;
  sol.residual_norm = kr.relative_residual;
  sol.residual_history = kr.history;
  if (kr.converged)
    remember(x, rhs);
  else
    sol.message = "no convergence after " + std::to_string(kr.iterations) + " iterations (relative residual " +
                  std::to_string(kr.relative_residual) + ")";

  for (std::size_t k = 0; k < x.size(); ++k)
    x[k] += u_fixed[k];
  finish(step, x, reference_.dilatation(x), pf);
  return step;
}

StepResult Simulation::solve_fixed_point(double t)
{
  StepResult step;
  step.time = t;
  auto& sol = step.solution;
  const auto pf = model_.pore_pressure_at(t);
  const auto ext = model_.external_force(t);
  const auto u_fixed = prescribed();
  const std::size_t n = model_.dofs();

  std::vector<double> load(n);
  reference_.force(std::vector<double>(n, 0.0), pf, load);
  for (std::size_t k = 0; k < n; ++k)
    load[k] += ext[k];
  mask(load, model_.constraints);
  const double reference_norm = std::sqrt(dot(load, load));
  const double scale = reference_norm > 0.0 ? reference_norm : 1.0;

  std::vector<double> u = previous_.empty() ? u_fixed : previous_;
  for (std::size_t k = 0; k < n; ++k)
    if (model_.constraints.is_fixed(k))
      u[k] = u_fixed[k];

  LinearizedLps op(model_);
  std::vector<double> rhs(n), dx(n);
  double increment = std::numeric_limits<double>::infinity();
  for (int it = 0;; ++it) {
    op.freeze_directions(as_vectors(u));
    op.force(u, pf, rhs);
    for (std::size_t k = 0; k < n; ++k)
      rhs[k] += ext[k];
    mask(rhs, model_.constraints);
    sol.residual_norm = std::sqrt(dot(rhs, rhs)) / scale;
    if (increment <= config_.residual_tolerance && sol.residual_norm <= config_.residual_tolerance) {
      sol.converged = true;
      break;
    }
    if (it == config_.max_fixed_point_iterations) {
      sol.message = "direction updates did not settle after " + std::to_string(it) + " iterations (increment " +
                    std::to_string(increment) + ")";
      break;
    }
    std::fill(dx.begin(), dx.end(), 0.0);
    const auto kr = conjugate_gradient(op, model_.constraints, op.diagonal(), rhs, dx, config_.residual_tolerance,
                                       reference_norm, config_.max_iterations);
    sol.iterations += kr.iterations;
    sol.residual_history.insert(sol.residual_history.end(), kr.history.begin(), kr.history.end());
    for (std::size_t k = 0; k < n; ++k)
      u[k] += dx[k];
    if (!kr.converged) {
      sol.message = "linear solve did not converge after " + std::to_string(kr.iterations) + " iterations";
      break;
    }
    const double unorm = std::sqrt(dot(u, u));
    increment = std::sqrt(dot(dx, dx)) / (unorm > 0.0 ? unorm : 1.0);
  }
  if (sol.converged)
    previous_ = u;

  const auto uv = as_vectors(u);
  const auto states = evaluate_states(model_.particles, model_.neighbors, model_.weighted_volume, model_.influence,
                                      model_.material, model_.gamma, uv, pf);
  finish(step, u, states.dilatation, pf);
  return step;
}

std::vector<StepResult> solve_quasistatic(const ProblemSpec& spec)
{
  Simulation sim(assemble_model(spec), spec.solver);
  std::vector<StepResult> out;
  for (double t : spec.schedule.steps()) {
    out.push_back(sim.solve(t));
    if (!out.back().solution.converged)
      break;
  }
  return out;
}

} // namespace pdpore
