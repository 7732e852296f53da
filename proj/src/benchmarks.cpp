#include "pdpore/benchmarks.hpp"

#include "pdpore/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace pdpore {

namespace {

constexpr double foot = 0.3048;
constexpr double psi = 6894.757293168361;
constexpr double ksi = 1000.0 * psi;

std::string format(const char* fmt, double a, double b = 0.0, double c = 0.0)
{
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

TagDefinition layer(std::string name, int axis, SelectLayer::Side side, std::vector<std::string> within = {},
                    std::vector<std::string> exclude = {})
{
  return TagDefinition{std::move(name), SelectLayer{axis, side, 1}, std::move(within), std::move(exclude)};
}

/// Lattice with `cells` cells per axis spanning [lo, hi].
LatticeSpec lattice_with_cells(const Vec3& lo, const Vec3& hi, const std::array<int, 3>& cells)
{
  LatticeSpec lattice;
  lattice.lo = lo;
  lattice.hi = hi;
  for (int a = 0; a < 3; ++a)
    lattice.spacing[a] = (hi[a] - lo[a]) / cells[a];
  return lattice;
}

int cells_for(double extent, double target_spacing)
{
  return std::max(1, static_cast<int>(std::lround(extent / target_spacing)));
}

/// Axial column on a unit cross-section with its bottom layer held axially
/// and four centre particles of that layer held laterally.
void column_supports(ProblemSpec& spec, double z_bottom)
{
  spec.tags.push_back(layer("bottom", 2, SelectLayer::Side::low));
  spec.tags.push_back(layer("top", 2, SelectLayer::Side::high));
  spec.tags.push_back(TagDefinition{"pins", SelectNearest{Vec3(0.5, 0.5, z_bottom), 4}, {"bottom"}, {}});
  spec.bcs.fixed = {{"bottom", 2, 0.0}, {"pins", 0, 0.0}, {"pins", 1, 0.0}};
}

struct Group
{
  double coordinate = 0.0;
  double value = 0.0;
};

/// Mean of displacement component `component` over particles sharing the
/// lattice coordinate along `axis`, in increasing coordinate order.
std::vector<Group> group_means(const ParticleSet& particles, const std::vector<Vec3>& u, int axis, int component,
                               int required_tag = -1)
{
  std::map<long long, std::pair<double, int>> sums;
  std::map<long long, double> coords;
  const double h = particles.spacing[axis];
  for (std::size_t i = 0; i < particles.size(); ++i) {
    if (required_tag >= 0 && !particles.has_tag(i, required_tag))
      continue;
    const long long key = std::llround(particles.positions[i][axis] / h);
    auto& s = sums[key];
    s.first += u[i][component];
    s.second += 1;
    coords[key] = particles.positions[i][axis];
  }
  std::vector<Group> out;
  for (const auto& [key, s] : sums)
    out.push_back(Group{coords[key], s.first / s.second});
  return out;
}

template <class OnStep>
bool run_case(BenchmarkReport& report, const std::string& label, const ProblemSpec& spec, OnStep&& on_step)
{
  CaseSummary summary;
  summary.label = label;
  try {
    Simulation sim(assemble_model(spec), spec.solver);
    summary.particles = sim.model().particles.size();
    summary.bonds = sim.model().neighbors.bond_count();
    summary.converged = true;
    for (double t : spec.schedule.steps()) {
      auto step = sim.solve(t);
      ++summary.steps;
      summary.iterations += step.solution.iterations;
      summary.residual_norm = std::max(summary.residual_norm, step.solution.residual_norm);
      if (!step.solution.converged) {
        summary.converged = false;
        summary.message = "t = " + std::to_string(t) + ": " + step.solution.message;
        break;
      }
      on_step(sim.model(), step);
    }
  }
  catch (const std::exception& e) {
    summary.converged = false;
    summary.message = e.what();
  }
  report.cases.push_back(summary);
  return summary.converged;
}

// ---------------------------------------------------------------------------

void run_lighthouse(BenchmarkReport& report, double resolution)
{
  const LighthouseParams params;
  LighthouseParams dry_params = params;
  dry_params.gamma_f = 0.0;
  const MaterialParams material{params.bulk_modulus, params.shear_modulus};
  report.notes.push_back(format("E from the parameter table = %.4g GPa; 9k mu/(3k + mu) = %.4g GPa (%.2f%% apart). "
                                "The closed form uses the table value, the particle model uses k and mu.",
                                params.youngs_modulus * 1e-9, material.youngs_modulus() * 1e-9,
                                100.0 * (params.youngs_modulus / material.youngs_modulus() - 1.0)));
  report.notes.push_back("Pore pressure p_f = gamma_f x with x downward from the water line (suction above it); "
                         "loads per unit cross-section; column modelled with z = -x.");

  constexpr int probe_count = 20;
  for (bool wet : {false, true}) {
    const std::string series = wet ? "effective_stress" : "dry";
    const LighthouseParams& oracle = wet ? params : dry_params;
    std::vector<Group> layers;
    const bool ok = run_case(report, series, lighthouse_problem(params, wet, resolution),
                             [&](const Model& model, const StepResult& step) {
                               layers = group_means(model.particles, step.solution.displacements, 2, 2);
                             });
    if (!ok)
      continue;

    double max_ref = 0.0, max_err = 0.0, max_col = 0.0, max_col_err = 0.0;
    std::vector<Probe> probes;
    for (int k = 0; k < probe_count; ++k) {
      const double target = -params.a + (params.a + params.b) * k / (probe_count - 1);
      const auto nearest = std::min_element(layers.begin(), layers.end(), [&](const Group& l, const Group& r) {
        return std::abs(-l.coordinate - target) < std::abs(-r.coordinate - target);
      });
      const double x = -nearest->coordinate;
      const double computed = -nearest->value;
      const double ref = lighthouse_exact(x, oracle);
      const double col = lighthouse_column_solution(x, params, wet);
      probes.push_back(Probe{series, x, computed, ref, "closed form"});
      max_ref = std::max(max_ref, std::abs(ref));
      max_err = std::max(max_err, std::abs(computed - ref));
      max_col = std::max(max_col, std::abs(col));
      max_col_err = std::max(max_col_err, std::abs(computed - col));
    }
    report.probes.insert(report.probes.end(), probes.begin(), probes.end());
    report.metrics.push_back(Metric{series + ".max_relative_error", max_err / max_ref});
    report.metrics.push_back(Metric{series + ".max_relative_error_vs_column_solution", max_col_err / max_col});
    report.metrics.push_back(Metric{series + ".top_settlement_m", probes.front().computed});
  }

  // below the water line the effective-stress column settles less
  std::vector<const Probe*> dry, wet;
  for (const auto& p : report.probes)
    (p.series == "dry" ? dry : wet).push_back(&p);
  if (dry.size() == wet.size() && !dry.empty()) {
    bool holds = true;
    int compared = 0;
    for (std::size_t k = 0; k < dry.size(); ++k) {
      if (!(dry[k]->position > 0.0 && dry[k]->position < params.b - params.spacing[2]))
        continue;
      ++compared;
      holds = holds && std::abs(wet[k]->computed) < std::abs(dry[k]->computed);
    }
    report.checks.push_back(
      PropertyCheck{"submerged_settles_less", holds && compared > 0,
                    std::to_string(compared) + " submerged probes compared (|u_wet| < |u_dry|)"});
  }
}

void run_harmonic(BenchmarkReport& report, double resolution)
{
  const HarmonicParams params;
  const MaterialParams material{params.bulk_modulus, params.shear_modulus};
  report.notes.push_back(format("E from the parameter table = %.4g MPa; 9k mu/(3k + mu) = %.4g MPa.",
                                params.youngs_modulus * 1e-6, material.youngs_modulus() * 1e-6));
  report.notes.push_back("F(t) is applied as a traction in Pa on the unit cross-section, pointing out of the "
                         "column; deflection is the outward displacement of the loaded surface.");

  std::vector<double> computed[2];
  std::vector<double> times;
  for (int wet = 0; wet < 2; ++wet) {
    const std::string series = wet ? "effective_stress" : "dry";
    const auto spec = harmonic_problem(params, wet != 0, resolution);
    bool any_drained = false;
    const bool ok = run_case(report, series, spec, [&](const Model& model, const StepResult& step) {
      const int bit = model.particles.tag_index("top");
      double sum = 0.0;
      int count = 0;
      for (std::size_t i = 0; i < model.particles.size(); ++i)
        if (model.particles.has_tag(i, bit)) {
          sum += step.solution.displacements[i][2];
          ++count;
        }
      const double u = sum / count;
      const auto exact = harmonic_exact(step.time, params, wet != 0);
      any_drained = any_drained || exact.drained;
      computed[wet].push_back(u);
      if (wet == 0)
        times.push_back(step.time);
      report.probes.push_back(Probe{series, step.time, u, exact.deflection, "closed form"});
    });
    if (!ok)
      continue;
    double peak = 0.0, err = 0.0;
    for (std::size_t k = 0; k < computed[wet].size(); ++k) {
      const double ref = harmonic_exact(spec.schedule.times[k], params, wet != 0).deflection;
      peak = std::max(peak, std::abs(ref));
      err = std::max(err, std::abs(computed[wet][k] - ref));
    }
    report.metrics.push_back(Metric{series + ".max_relative_error", err / peak});
    if (any_drained)
      report.notes.push_back(series + ": steps after tau evaluated with p_f = 0");
  }

  if (computed[0].size() == computed[1].size() && !computed[0].empty()) {
    bool holds = true;
    int compared = 0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      if (!(harmonic_pore_pressure(times[k], params) > 0.0))
        continue;
      ++compared;
      holds = holds && computed[1][k] >= computed[0][k];
    }
    report.checks.push_back(PropertyCheck{"effective_stress_at_least_dry", holds && compared > 0,
                                          std::to_string(compared) + " steps with p_f > 0 compared"});
  }
}

void run_leakoff(BenchmarkReport& report, double resolution)
{
  const LeakoffParams params;
  report.notes.push_back("Quarter plate, plane strain as a slab with zero x3 displacement on both faces; "
                         "penetration depth measured from the borehole surface.");

  struct Profile
  {
    double depth;
    double borehole;
    double right;
  };
  std::vector<Profile> profiles;
  for (double depth : params.penetration_depths) {
    const std::string series = "u1.penetration_" + format("%g", depth * 100.0) + "cm";
    std::vector<Group> row;
    const bool ok = run_case(report, series, leakoff_problem(params, depth, resolution),
                             [&](const Model& model, const StepResult& step) {
                               row = group_means(model.particles, step.solution.displacements, 0, 0,
                                                 model.particles.tag_index("bottom"));
                             });
    if (!ok || row.empty())
      continue;
    for (const auto& g : row)
      report.probes.push_back(Probe{series, g.coordinate, g.value, std::nullopt, ""});
    profiles.push_back(Profile{depth, row.front().value, row.back().value});
  }

  struct Table
  {
    double depth;
    const char* label;
    double borehole;
    double right;
  };
  const Table table[] = {{0.0, "dry", 4.85e-3, 1.62e-3}, {0.04, "penetration_4cm", 6.30e-3, 4.17e-3}};
  for (const auto& row : table)
    for (const auto& p : profiles)
      if (p.depth == row.depth) {
        report.probes.push_back(Probe{std::string("table.") + row.label + ".borehole", params.borehole_radius,
                                      p.borehole, row.borehole, "displacement table"});
        report.probes.push_back(Probe{std::string("table.") + row.label + ".right", params.half_width, p.right,
                                      row.right, "displacement table"});
        report.metrics.push_back(
          Metric{std::string(row.label) + ".borehole.relative_error", std::abs(p.borehole - row.borehole) / row.borehole});
        report.metrics.push_back(
          Metric{std::string(row.label) + ".right.relative_error", std::abs(p.right - row.right) / row.right});
        report.metrics.push_back(Metric{std::string(row.label) + ".borehole_mm", p.borehole * 1e3});
        report.metrics.push_back(Metric{std::string(row.label) + ".right_mm", p.right * 1e3});
      }

  if (profiles.size() == params.penetration_depths.size() && profiles.size() >= 2) {
    bool right_monotone = true;
    std::string detail;
    for (std::size_t k = 0; k < profiles.size(); ++k) {
      if (k > 0)
        right_monotone = right_monotone && profiles[k].right >= profiles[k - 1].right;
      detail += format("%g cm: %.6g mm; ", profiles[k].depth * 100.0, profiles[k].right * 1e3);
    }
    report.checks.push_back(PropertyCheck{"right_edge_nondecreasing_in_depth", right_monotone, detail});
    report.checks.push_back(PropertyCheck{
      "borehole_increases_with_slight_penetration", profiles[1].borehole > profiles[0].borehole,
      format("dry %.6g mm, %g cm %.6g mm", profiles[0].borehole * 1e3, profiles[1].depth * 100.0,
             profiles[1].borehole * 1e3)});
  }
}

void run_subsidence(BenchmarkReport& report, double resolution)
{
  const SubsidenceParams params;
  report.notes.push_back(format("Shear modulus listed as \"3.846.2 ksi\"; read as %g ksi (nu = %.3f). The literal "
                                "reading 3846.2 ksi is solved as a diagnostic case.",
                                params.shear_modulus_ksi,
                                MaterialParams{params.bulk_modulus_ksi, params.shear_modulus_ksi}.poisson_ratio()));
  report.notes.push_back(format("Geometry is a documented guess: quarter domain %g ft wide, %g ft deep", params.width_ft,
                                params.depth_ft) +
                         format(", reservoir layer between %g and %g ft", params.layer_bottom_ft, params.layer_top_ft) +
                         format(", borehole radius %g ft.", params.borehole_radius_ft));
  report.notes.push_back(format("Reported field subsidence of %g ft is indicative only and is not asserted.",
                                params.reported_subsidence_ft));

  std::vector<Vec3> positions, u;
  const bool ok = run_case(report, "extraction", subsidence_problem(params, resolution),
                [&](const Model& model, const StepResult& step) {
                  const int bit = model.particles.tag_index("top");
                  for (std::size_t i = 0; i < model.particles.size(); ++i)
                    if (model.particles.has_tag(i, bit)) {
                      positions.push_back(model.particles.positions[i]);
                      u.push_back(step.solution.displacements[i]);
                    }
                });
  if (!ok || positions.empty())
    return;

  bool downward = true;
  int upward = 0;
  double highest = -std::numeric_limits<double>::infinity();
  Vec3 highest_at = Vec3::Zero();
  double r_min = std::numeric_limits<double>::infinity();
  double max_mag = 0.0;
  std::size_t arg = 0;
  double y_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < positions.size(); ++k) {
    downward = downward && u[k][2] < 0.0;
    upward += u[k][2] >= 0.0 ? 1 : 0;
    if (u[k][2] > highest) {
      highest = u[k][2];
      highest_at = positions[k];
    }
    r_min = std::min(r_min, positions[k].head<2>().norm());
    y_min = std::min(y_min, positions[k][1]);
    if (std::abs(u[k][2]) > max_mag) {
      max_mag = std::abs(u[k][2]);
      arg = k;
    }
  }
  const double r_arg = positions[arg].head<2>().norm();
  report.checks.push_back(PropertyCheck{
    "surface_downward_everywhere", downward,
    std::to_string(upward) + " of " + std::to_string(positions.size()) +
      format(" surface particles not downward; highest u3 = %.6g ft at (%.6g, %.6g) ft", highest / foot,
             highest_at[0] / foot, highest_at[1] / foot)});

  // Ring means of u3 over complete quarter rings (r up to the domain width).
  const double ring = params.spacing_ft * foot / resolution;
  const double r_limit = params.width_ft * foot;
  std::map<long long, std::pair<double, int>> rings;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const double r = positions[k].head<2>().norm();
    if (r <= r_limit) {
      auto& s = rings[static_cast<long long>(std::floor(r / ring))];
      s.first += u[k][2];
      s.second += 1;
    }
  }
  std::vector<std::pair<double, double>> profile;
  for (const auto& [key, s] : rings)
    profile.emplace_back((key + 0.5) * ring, s.first / s.second);
  bool peak_inner = !profile.empty();
  for (std::size_t k = 1; k < profile.size(); ++k)
    peak_inner = peak_inner && std::abs(profile[k].second) < std::abs(profile.front().second);
  report.checks.push_back(PropertyCheck{
    "maximum_at_borehole_axis", peak_inner,
    format("innermost ring mean |u3| = %.6g ft; largest single-particle |u3| at r = %.6g ft (nearest r = %.6g ft)",
           profile.empty() ? 0.0 : std::abs(profile.front().second) / foot, r_arg / foot, r_min / foot)});
  int ring_violations = 0;
  for (std::size_t k = 1; k < profile.size(); ++k)
    ring_violations += std::abs(profile[k].second) < std::abs(profile[k - 1].second) ? 0 : 1;
  report.checks.push_back(PropertyCheck{"monotone_radial_decay", ring_violations == 0 && profile.size() > 1,
                                        std::to_string(profile.size()) + format(" rings of width %g ft up to r = %g ft",
                                                                                ring / foot, r_limit / foot)});
  for (const auto& [r, uz] : profile)
    report.probes.push_back(Probe{"surface_ring_u3_ft", r / foot, uz / foot, std::nullopt, ""});

  std::vector<std::pair<double, double>> row;
  for (std::size_t k = 0; k < positions.size(); ++k)
    if (std::abs(positions[k][1] - y_min) < 1e-9 * (1.0 + std::abs(y_min)))
      row.emplace_back(positions[k][0], u[k][2]);
  std::sort(row.begin(), row.end());
  int row_violations = 0;
  for (std::size_t k = 1; k < row.size(); ++k)
    row_violations += std::abs(row[k].second) < std::abs(row[k - 1].second) ? 0 : 1;
  for (const auto& [x, uz] : row)
    report.probes.push_back(Probe{"surface_row_u3_ft", x / foot, uz / foot, std::nullopt, ""});
  report.metrics.push_back(Metric{"row_nonmonotone_steps", double(row_violations)});
  report.probes.push_back(Probe{"axis_subsidence_ft", r_arg / foot, max_mag / foot, params.reported_subsidence_ft,
                                "reported field value (indicative)"});
  report.metrics.push_back(Metric{"axis_subsidence_ft", max_mag / foot});

  SubsidenceParams literal = params;
  literal.shear_modulus_ksi = 3846.2;
  double literal_max = 0.0;
  int literal_upward = 0;
  if (run_case(report, "literal_shear_modulus_3846.2ksi", subsidence_problem(literal, resolution),
               [&](const Model& model, const StepResult& step) {
                 const int bit = model.particles.tag_index("top");
                 for (std::size_t i = 0; i < model.particles.size(); ++i)
                   if (model.particles.has_tag(i, bit)) {
                     const double uz = step.solution.displacements[i][2];
                     literal_max = std::max(literal_max, -uz);
                     literal_upward += uz >= 0.0 ? 1 : 0;
                   }
               })) {
    report.metrics.push_back(Metric{"literal_reading.axis_subsidence_ft", literal_max / foot});
    report.metrics.push_back(Metric{"literal_reading.surface_particles_not_downward", double(literal_upward)});
  }
}

} // namespace

std::string_view to_string(BenchmarkName name)
{
  switch (name) {
  case BenchmarkName::lighthouse:
    return "lighthouse";
  case BenchmarkName::harmonic_consolidation:
    return "harmonic_consolidation";
  case BenchmarkName::subsidence:
    return "subsidence";
  case BenchmarkName::leakoff:
    return "leakoff";
  }
  return "lighthouse";
}

BenchmarkName benchmark_from_string(std::string_view name)
{
  for (auto b : {BenchmarkName::lighthouse, BenchmarkName::harmonic_consolidation, BenchmarkName::subsidence,
                 BenchmarkName::leakoff})
    if (to_string(b) == name)
      return b;
  throw ConfigError("name", "unknown benchmark '" + std::string(name) +
                              "' (expected lighthouse, harmonic_consolidation, subsidence or leakoff)");
}

// ---------------------------------------------------------------------------

double lighthouse_exact(double x, const LighthouseParams& p)
{
  if (!(x >= -p.a && x <= p.b))
    throw std::domain_error("lighthouse_exact: x = " + std::to_string(x) + " outside [-a, b]");
  const double psi1 = p.gamma_t + p.gamma_f;
  const double psi2 = p.gamma_t - p.gamma_f;
  const double heaviside = x >= 0.0 ? 1.0 : 0.0;
  return (-psi2 * x * x * (heaviside - 0.5) - psi1 * p.a * x + p.weight * (p.b - x) / p.area + p.a * p.b * psi1 +
          psi2 * p.b * p.b / 2.0) /
         p.youngs_modulus;
}

double lighthouse_column_solution(double x, const LighthouseParams& p, bool effective_stress)
{
  if (!(x >= -p.a && x <= p.b))
    throw std::domain_error("lighthouse_column_solution: x = " + std::to_string(x) + " outside [-a, b]");
  const double E = MaterialParams{p.bulk_modulus, p.shear_modulus}.youngs_modulus();
  double u = (p.weight / p.area * (p.b - x) + p.gamma_t * (p.a * (p.b - x) + (p.b * p.b - x * x) / 2.0)) / E;
  if (effective_stress)
    u -= p.gamma_f * (p.b * p.b - x * x) / (6.0 * p.bulk_modulus);
  return u;
}

ProblemSpec lighthouse_problem(const LighthouseParams& params, bool effective_stress, double resolution)
{
  ProblemSpec spec;
  spec.lattice.lo = Vec3(0.0, 0.0, -params.b);
  spec.lattice.hi = Vec3(1.0, 1.0, params.a);
  spec.lattice.spacing = params.spacing / resolution;
  spec.horizon = HorizonSpec{HorizonSpec::Kind::ratio, params.horizon_ratio};
  spec.material = MaterialParams{params.bulk_modulus, params.shear_modulus};
  if (effective_stress)
    spec.pressure_field = Hydrostatic{2, 0.0, params.gamma_f};
  spec.body_force = SpecificWeight{2, params.gamma_t};
  column_supports(spec, -params.b);
  PointLoad load;
  load.tag = "top";
  load.total = Vec3(0.0, 0.0, -params.weight / params.area);
  spec.bcs.loads.push_back(load);
  return spec;
}

double harmonic_load(double t, const HarmonicParams& p)
{
  return p.amplitude * (1.0 - std::cos(p.omega * t));
}

double harmonic_pore_pressure(double t, const HarmonicParams& p)
{
  return t > p.tau ? 0.0 : 2.0 * harmonic_load(t, p) * (1.0 - t / p.tau);
}

HarmonicValue harmonic_exact(double t, const HarmonicParams& p, bool effective_stress)
{
  HarmonicValue v;
  v.drained = t > p.tau;
  const double pf0 = effective_stress ? harmonic_pore_pressure(t, p) : 0.0;
  v.deflection = p.length / p.youngs_modulus * (harmonic_load(t, p) + pf0 / 2.0);
  return v;
}

ProblemSpec harmonic_problem(const HarmonicParams& params, bool effective_stress, double resolution)
{
  const double h = std::cbrt(params.cell_volume) / resolution;
  const int across = cells_for(1.0, h);
  ProblemSpec spec;
  spec.lattice = lattice_with_cells(Vec3(0.0, 0.0, -params.length), Vec3(1.0, 1.0, 0.0),
                                    {across, across, cells_for(params.length, h)});
  spec.horizon = HorizonSpec{HorizonSpec::Kind::ratio, params.horizon_ratio};
  spec.material = MaterialParams{params.bulk_modulus, params.shear_modulus};
  if (effective_stress) {
    TimeScaled field;
    field.base = PorePressureField{AxialRamp{2, -params.length, 1.0, 0.0, 0.0}};
    field.scale = ProductScale{{OneMinusCosScale{2.0 * params.amplitude, params.omega},
                                LinearScale{0.0, 1.0, params.tau, 0.0}}};
    spec.pressure_field = PorePressureField{std::move(field)};
  }
  column_supports(spec, -params.length);
  PointLoad load;
  load.tag = "top";
  load.total = Vec3(0.0, 0.0, 1.0);
  load.scale = OneMinusCosScale{params.amplitude, params.omega};
  spec.bcs.loads.push_back(load);
  spec.schedule = LoadSchedule::uniform(0.0, params.tau, params.steps);
  return spec;
}

ProblemSpec leakoff_problem(const LeakoffParams& params, double penetration, double resolution)
{
  const double h = std::cbrt(params.cell_volume) / resolution;
  const int in_plane = cells_for(params.half_width, h);
  ProblemSpec spec;
  spec.lattice = lattice_with_cells(Vec3::Zero(), Vec3(params.half_width, params.half_width, params.thickness),
                                    {in_plane, in_plane, cells_for(params.thickness, h)});
  spec.lattice.exclusion = CylinderExclusion{2, Vec3::Zero(), params.borehole_radius};
  spec.horizon = HorizonSpec{HorizonSpec::Kind::ratio, params.horizon_ratio};
  spec.material = MaterialParams{params.bulk_modulus, params.shear_modulus};
  if (penetration > 0.0)
    spec.pressure_field = RadialRamp{2,
                                     Vec3::Zero(),
                                     params.borehole_radius,
                                     params.borehole_pressure,
                                     params.borehole_radius + penetration,
                                     0.0,
                                     std::nullopt};

  const double dr = spec.lattice.spacing.head<2>().maxCoeff();
  spec.tags = {
    layer("left", 0, SelectLayer::Side::low),
    layer("bottom", 1, SelectLayer::Side::low),
    layer("right", 0, SelectLayer::Side::high),
    layer("top", 1, SelectLayer::Side::high),
    layer("back", 2, SelectLayer::Side::low),
    layer("front", 2, SelectLayer::Side::high),
    TagDefinition{"borehole", SelectShell{2, Vec3::Zero(), params.borehole_radius, params.borehole_radius + dr},
                  {}, {"left", "bottom"}},
  };
  spec.bcs.fixed = {{"left", 0, 0.0}, {"bottom", 1, 0.0}, {"back", 2, 0.0}, {"front", 2, 0.0}};

  const double face = params.half_width * params.thickness;
  PointLoad right;
  right.tag = "right";
  right.total = Vec3(-params.confinement * face, 0.0, 0.0);
  PointLoad top;
  top.tag = "top";
  top.total = Vec3(0.0, -params.confinement * face, 0.0);
  PointLoad bore;
  bore.tag = "borehole";
  bore.kind = PointLoad::Kind::radial;
  bore.axis = 2;
  bore.magnitude = params.borehole_pressure * std::numbers::pi * params.borehole_radius / 2.0 * params.thickness;
  spec.bcs.loads = {right, top, bore};
  return spec;
}

ProblemSpec subsidence_problem(const SubsidenceParams& params, double resolution)
{
  const double width = params.width_ft * foot;
  const double depth = params.depth_ft * foot;
  const double h = params.spacing_ft * foot / resolution;
  const int lateral = cells_for(width, h);
  ProblemSpec spec;
  spec.lattice = lattice_with_cells(Vec3(0.0, 0.0, -depth), Vec3(width, width, 0.0),
                                    {lateral, lateral, cells_for(depth, h)});
  spec.lattice.exclusion = CylinderExclusion{2, Vec3::Zero(), params.borehole_radius_ft * foot};
  spec.horizon = HorizonSpec{HorizonSpec::Kind::ratio, params.horizon_ratio};
  spec.material = MaterialParams{params.bulk_modulus_ksi * ksi, params.shear_modulus_ksi * ksi};
  spec.pressure_field = RadialRamp{2,
                                   Vec3::Zero(),
                                   params.borehole_radius_ft * foot,
                                   params.pressure_change_psi * psi,
                                   width,
                                   0.0,
                                   Interval{params.layer_bottom_ft * foot, params.layer_top_ft * foot}};
  spec.tags = {
    layer("x1_low", 0, SelectLayer::Side::low),  layer("x1_high", 0, SelectLayer::Side::high),
    layer("x2_low", 1, SelectLayer::Side::low),  layer("x2_high", 1, SelectLayer::Side::high),
    layer("bottom", 2, SelectLayer::Side::low),  layer("top", 2, SelectLayer::Side::high),
  };
  spec.bcs.fixed = {{"x1_low", 0, 0.0}, {"x1_high", 0, 0.0}, {"x2_low", 1, 0.0},
                    {"x2_high", 1, 0.0}, {"bottom", 2, 0.0}};
  return spec;
}

ProblemSpec benchmark_problem(BenchmarkName name, double resolution)
{
  switch (name) {
  case BenchmarkName::lighthouse:
    return lighthouse_problem(LighthouseParams{}, true, resolution);
  case BenchmarkName::harmonic_consolidation:
    return harmonic_problem(HarmonicParams{}, true, resolution);
  case BenchmarkName::subsidence:
    return subsidence_problem(SubsidenceParams{}, resolution);
  case BenchmarkName::leakoff:
    return leakoff_problem(LeakoffParams{}, LeakoffParams{}.penetration_depths.back(), resolution);
  }
  return {};
}

// ---------------------------------------------------------------------------

bool BenchmarkReport::solved() const
{
  return !cases.empty() && std::all_of(cases.begin(), cases.end(), [](const auto& c) { return c.converged; });
}

const Metric* BenchmarkReport::metric(std::string_view key) const
{
  for (const auto& m : metrics)
    if (m.name == key)
      return &m;
  return nullptr;
}

const PropertyCheck* BenchmarkReport::check(std::string_view key) const
{
  for (const auto& c : checks)
    if (c.name == key)
      return &c;
  return nullptr;
}

BenchmarkReport run_benchmark(const BenchmarkSpec& spec)
{
  if (!(spec.resolution > 0.0) || !std::isfinite(spec.resolution))
    throw ConfigError("resolution", "resolution multiplier must be positive");
  BenchmarkReport report;
  report.name = std::string(to_string(spec.name));
  report.resolution = spec.resolution;
  switch (spec.name) {
  case BenchmarkName::lighthouse:
    run_lighthouse(report, spec.resolution);
    break;
  case BenchmarkName::harmonic_consolidation:
    run_harmonic(report, spec.resolution);
    break;
  case BenchmarkName::subsidence:
    run_subsidence(report, spec.resolution);
    break;
  case BenchmarkName::leakoff:
    run_leakoff(report, spec.resolution);
    break;
  }
  return report;
}

} // namespace pdpore
