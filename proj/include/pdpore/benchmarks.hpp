#pragma once

#include "pdpore/problem.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pdpore {

enum class BenchmarkName
{
  lighthouse,
  harmonic_consolidation,
  subsidence,
  leakoff
};

std::string_view to_string(BenchmarkName name);
BenchmarkName benchmark_from_string(std::string_view name);

// ---------------------------------------------------------------------------
// Lighthouse on a partially submerged rock column. x runs downward from the
// water line, from -a (column top) to b (base). SI units.

struct LighthouseParams
{
  double a = 5.0;
  double b = 20.0;
  double weight = 20e6;
  double area = 78.54;
  double gamma_t = 25.67e3;
  double gamma_f = 10.02e3;
  double youngs_modulus = 29.7e9;
  double bulk_modulus = 9.0e9;
  double shear_modulus = 15.0e9;
  double horizon_ratio = 5.0;
  Vec3 spacing{0.125, 0.125, 0.1};
};

/// Closed-form settlement u(x) (positive downward) with H(0) = 1. Pass
/// gamma_f = 0 for the dry column. Throws std::domain_error outside [-a, b].
double lighthouse_exact(double x, const LighthouseParams& params);

/// Classical column solution for the particle model's own field choice:
/// weight plus overburden with E = 9k mu/(3k + mu), and a free isotropic
/// pore-pressure strain gamma p_f / (3k) with p_f = gamma_f x.
double lighthouse_column_solution(double x, const LighthouseParams& params, bool effective_stress);

ProblemSpec lighthouse_problem(const LighthouseParams& params, bool effective_stress, double resolution = 1.0);

// ---------------------------------------------------------------------------
// Column of length L fixed at x = L, loaded at x = 0 by the traction
// F(t) = amplitude (1 - cos(omega t)) (pointing out of the column), with a
// pore pressure falling linearly from p_f0(t) = 2F(t)(1 - t/tau) at x = L to
// zero at x = 0.

struct HarmonicParams
{
  double length = 10.0;
  double youngs_modulus = 10.0e6;
  double bulk_modulus = 3.33e6;
  double shear_modulus = 5.0e6;
  double tau = 0.4;
  double amplitude = 50e3;
  double omega = 75.0;
  double horizon_ratio = 3.5;
  int steps = 200;
  double cell_volume = 0.0026653;
};

double harmonic_load(double t, const HarmonicParams& params);
double harmonic_pore_pressure(double t, const HarmonicParams& params);

struct HarmonicValue
{
  double deflection = 0.0;
  /// t > tau: evaluated with p_f = 0.
  bool drained = false;
};

/// Surface deflection (L/E)(F(t) + p_f0(t)/2); p_f0 dropped for the dry case.
HarmonicValue harmonic_exact(double t, const HarmonicParams& params, bool effective_stress = true);

ProblemSpec harmonic_problem(const HarmonicParams& params, bool effective_stress, double resolution = 1.0);

// ---------------------------------------------------------------------------
// Quarter plate around a pressurized borehole (plane strain slab). SI units.

struct LeakoffParams
{
  double borehole_radius = 0.01;
  double half_width = 0.05;
  double thickness = 0.005;
  double cell_volume = 1.153e-9;
  double bulk_modulus = 9.0e9;
  double shear_modulus = 15.0e9;
  double confinement = 1.0e6;
  double borehole_pressure = 0.1e9;
  double horizon_ratio = 3.5;
  std::vector<double> penetration_depths{0.0, 0.01, 0.02, 0.04};
};

/// `penetration` is measured from the borehole surface; 0 means dry.
ProblemSpec leakoff_problem(const LeakoffParams& params, double penetration, double resolution = 1.0);

// ---------------------------------------------------------------------------
// Quarter domain above and around a depleting reservoir layer. Lengths in
// feet and pressures in psi here; converted to SI in the problem.

struct SubsidenceParams
{
  double width_ft = 1500.0;
  double depth_ft = 750.0;
  double layer_top_ft = -300.0;
  double layer_bottom_ft = -500.0;
  double borehole_radius_ft = 40.0;
  double spacing_ft = 50.0;
  double bulk_modulus_ksi = 3.8642;
  /// Listed as "3.846.2 ksi"; read as 3.8462 ksi.
  double shear_modulus_ksi = 3.8462;
  double pressure_change_psi = -150.0;
  double horizon_ratio = 3.5;
  double reported_subsidence_ft = 4.5;
};

ProblemSpec subsidence_problem(const SubsidenceParams& params, double resolution = 1.0);

/// The default problem of a benchmark (the effective-stress case, or for
/// leak-off the deepest penetration).
ProblemSpec benchmark_problem(BenchmarkName name, double resolution = 1.0);

// ---------------------------------------------------------------------------

struct BenchmarkSpec
{
  BenchmarkName name = BenchmarkName::lighthouse;
  /// Divides the lattice spacing.
  double resolution = 1.0;
};

struct Probe
{
  std::string series;
  double position = 0.0; ///< probe coordinate (oracle frame) or time
  double computed = 0.0;
  std::optional<double> reference;
  std::string source; ///< where the reference value comes from
};

struct Metric
{
  std::string name;
  double value = 0.0;
};

struct PropertyCheck
{
  std::string name;
  bool holds = false;
  std::string detail;
};

struct CaseSummary
{
  std::string label;
  std::size_t particles = 0;
  std::size_t bonds = 0;
  int steps = 0;
  bool converged = false;
  int iterations = 0;
  double residual_norm = 0.0;
  std::string message;
};

struct BenchmarkReport
{
  std::string name;
  double resolution = 1.0;
  std::vector<std::string> notes;
  std::vector<CaseSummary> cases;
  std::vector<Probe> probes;
  std::vector<Metric> metrics;
  std::vector<PropertyCheck> checks;

  bool solved() const;
  const Metric* metric(std::string_view name) const;
  const PropertyCheck* check(std::string_view name) const;
};

/// Solves every case of a benchmark and compares against its oracle.
/// Solver failures are recorded in the report, not thrown.
BenchmarkReport run_benchmark(const BenchmarkSpec& spec);

} // namespace pdpore
