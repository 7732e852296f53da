#pragma once

#include "pdpore/problem.hpp"
#include "pdpore/solver.hpp"

#include <vector>

namespace pdpore {

/// Builds particles, neighbours, weighted volumes, constraints and loads.
Model assemble_model(const ProblemSpec& spec);

struct StepResult
{
  double time = 0.0;
  SolutionState solution;
  std::vector<double> dilatation;
  std::vector<double> pressure;
  std::vector<double> pore_pressure;
};

/// Quasi-static equilibrium solves on one model. Successive calls to solve()
/// warm-start from earlier solutions.
class Simulation
{
public:
  Simulation(Model model, SolverConfig config);
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  const Model& model() const { return model_; }
  const SolverConfig& config() const { return config_; }

  /// Equilibrium at time t. Never throws for non-convergence; check
  /// `solution.converged`.
  StepResult solve(double t);

private:
  StepResult solve_linear(double t);
  StepResult solve_fixed_point(double t);
  void finish(StepResult& step, const std::vector<double>& u, std::vector<double> theta,
              const std::vector<double>& pf) const;
  std::vector<double> prescribed() const;
  std::vector<double> galerkin_guess(const std::vector<double>& rhs) const;
  void remember(const std::vector<double>& x, const std::vector<double>& rhs);

  Model model_;
  SolverConfig config_;
  LinearizedLps reference_;
  std::vector<double> diagonal_;
  // K-orthonormal basis of earlier solutions and its image under K
  std::vector<std::vector<double>> basis_;
  std::vector<std::vector<double>> basis_image_;
  std::vector<double> previous_;
};

/// Solves every step of the schedule in order. Stops after the first step
/// that fails to converge (that step is still returned).
std::vector<StepResult> solve_quasistatic(const ProblemSpec& spec);

} // namespace pdpore
