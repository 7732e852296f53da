#include "pdpore/benchmarks.hpp"
#include "pdpore/simulation.hpp"

#include <doctest.h>

#include <functional>
#include <numbers>

using namespace pdpore;

namespace {

/// Composite Simpson rule on [lo, hi].
double simpson(const std::function<double(double)>& f, double lo, double hi, int intervals = 2000)
{
  const double h = (hi - lo) / intervals;
  double sum = f(lo) + f(hi);
  for (int k = 1; k < intervals; ++k)
    sum += (k % 2 ? 4.0 : 2.0) * f(lo + k * h);
  return sum * h / 3.0;
}

} // namespace

TEST_CASE("lighthouse closed form")
{
  const LighthouseParams p;
  CHECK(lighthouse_exact(p.b, p) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(lighthouse_exact(-p.a, p) == doctest::Approx(4.77e-4).epsilon(2e-3));
  CHECK(lighthouse_exact(-1e-9, p) == doctest::Approx(lighthouse_exact(1e-9, p)).epsilon(1e-9));
  CHECK_THROWS_AS(lighthouse_exact(p.b + 1.0, p), std::domain_error);
  CHECK_THROWS_AS(lighthouse_exact(-p.a - 1.0, p), std::domain_error);

  // Axial equilibrium E u' = -(F/A + psi1 a + psi2 |x|), u(b) = 0,
  // integrated numerically from the base.
  const double psi1 = p.gamma_t + p.gamma_f, psi2 = p.gamma_t - p.gamma_f;
  auto strain = [&](double x) { return -(p.weight / p.area + psi1 * p.a + psi2 * std::abs(x)) / p.youngs_modulus; };
  for (double x : {-5.0, -3.2, -0.7, 0.0, 4.0, 11.5, 19.0}) {
    const double u = x < 0.0 ? -simpson(strain, x, 0.0) - simpson(strain, 0.0, p.b) : -simpson(strain, x, p.b);
    CHECK(lighthouse_exact(x, p) == doctest::Approx(u).epsilon(1e-10));
  }
}

TEST_CASE("lighthouse column solution")
{
  LighthouseParams p;
  CHECK(lighthouse_column_solution(p.b, p, false) == 0.0);
  CHECK(lighthouse_column_solution(p.b, p, true) == 0.0);
  const double E = MaterialParams{p.bulk_modulus, p.shear_modulus}.youngs_modulus();
  // Weight plus overburden gamma_t (x + a), integrated from the base.
  auto strain = [&](double x) { return -(p.weight / p.area + p.gamma_t * (x + p.a)) / E; };
  for (double x : {-5.0, 0.0, 10.0})
    CHECK(lighthouse_column_solution(x, p, false) == doctest::Approx(-simpson(strain, x, p.b)).epsilon(1e-10));
  for (double x : {-5.0, 0.0, 10.0})
    CHECK(lighthouse_column_solution(x, p, true) < lighthouse_column_solution(x, p, false));
}

TEST_CASE("harmonic closed form")
{
  const HarmonicParams p;
  CHECK(harmonic_exact(0.0, p).deflection == 0.0);
  const auto end = harmonic_exact(p.tau, p);
  CHECK(end.deflection == doctest::Approx(p.length / p.youngs_modulus * harmonic_load(p.tau, p)));
  CHECK(harmonic_exact(0.5, p).drained);
  CHECK(harmonic_pore_pressure(0.5, p) == 0.0);
  const double peak = std::numbers::pi / 75.0;
  CHECK(harmonic_load(peak, p) == doctest::Approx(100e3));
  CHECK(harmonic_exact(peak, p).deflection == doctest::Approx(0.1895).epsilon(1e-3));

  // E u' = F + p_f(x) with p_f falling linearly from p_f0 at the fixed end to
  // zero at the loaded end; the deflection is the integral of the strain.
  for (double t : {0.01, 0.05, 0.2, 0.39}) {
    const double F = harmonic_load(t, p), p0 = harmonic_pore_pressure(t, p);
    const double u = simpson([&](double x) { return (F + p0 * x / p.length) / p.youngs_modulus; }, 0.0, p.length);
    CHECK(harmonic_exact(t, p).deflection == doctest::Approx(u).epsilon(1e-12));
    CHECK(harmonic_exact(t, p, false).deflection == doctest::Approx(p.length * F / p.youngs_modulus));
  }
}

TEST_CASE("benchmark names")
{
  for (auto name : {BenchmarkName::lighthouse, BenchmarkName::harmonic_consolidation, BenchmarkName::subsidence,
                    BenchmarkName::leakoff})
    CHECK(benchmark_from_string(to_string(name)) == name);
  try {
    benchmark_from_string("terzaghi");
    FAIL("expected ConfigError");
  }
  catch (const ConfigError& e) {
    CHECK(e.key() == "name");
  }
}

TEST_CASE("lighthouse problem")
{
  const LighthouseParams p;
  const auto spec = lighthouse_problem(p, true);
  CHECK(spec.lattice.cell_volume() == doctest::Approx(0.0015625));
  CHECK(spec.horizon_length() == doctest::Approx(5 * 0.125));
  const auto particles = build_particles(spec);
  CHECK(particles.size() == 16000);
  CHECK(particles.total_volume() == doctest::Approx(25.0));
  REQUIRE(spec.bcs.loads.size() == 1);
  CHECK(spec.bcs.loads[0].total.norm() == doctest::Approx(p.weight / p.area));
  REQUIRE(spec.pressure_field);
  CHECK(evaluate_pressure(*spec.pressure_field, Vec3(0.5, 0.5, -p.b), 0.0) == doctest::Approx(p.gamma_f * p.b));
  CHECK(evaluate_body_force(spec.body_force, Vec3::Zero(), 0.0)[2] == doctest::Approx(-p.gamma_t));
  CHECK_FALSE(lighthouse_problem(p, false).pressure_field);
}

TEST_CASE("harmonic problem")
{
  const HarmonicParams p;
  const auto spec = harmonic_problem(p, true);
  const auto particles = build_particles(spec);
  CHECK(particles.size() == 7u * 7u * 72u);
  CHECK(spec.lattice.cell_volume() == doctest::Approx(p.cell_volume).epsilon(0.02));
  CHECK(spec.schedule.times.size() == 200);
  CHECK(spec.schedule.times.back() == doctest::Approx(p.tau));
  CHECK(spec.horizon.value == 3.5);
}

TEST_CASE("leak-off problem")
{
  const LeakoffParams p;
  const auto dry = leakoff_problem(p, 0.0);
  CHECK_FALSE(dry.pressure_field);
  const auto wet = leakoff_problem(p, 0.04);
  REQUIRE(wet.pressure_field);
  CHECK(evaluate_pressure(*wet.pressure_field, Vec3(p.borehole_radius, 0, 0), 0.0) ==
        doctest::Approx(p.borehole_pressure));
  CHECK(evaluate_pressure(*wet.pressure_field, Vec3(p.borehole_radius + 0.04, 0, 0), 0.0) ==
        doctest::Approx(0.0));
  CHECK(wet.lattice.cell_volume() == doctest::Approx(p.cell_volume).epsilon(0.05));
  const auto particles = build_particles(wet);
  for (const auto& x : particles.positions)
    CHECK(x.head<2>().norm() >= p.borehole_radius);
  CHECK(particles.tagged(particles.tag_index("borehole")).size() > 0);
}

TEST_CASE("subsidence problem")
{
  const SubsidenceParams p;
  const auto spec = subsidence_problem(p);
  REQUIRE(spec.pressure_field);
  const double ft = 0.3048, psi = 6894.757293168361;
  CHECK(spec.material.bulk_modulus == doctest::Approx(p.bulk_modulus_ksi * 1000 * psi));
  const Vec3 inside(p.borehole_radius_ft * ft, 0.0, -400 * ft);
  CHECK(evaluate_pressure(*spec.pressure_field, inside, 0.0) == doctest::Approx(p.pressure_change_psi * psi));
  CHECK(evaluate_pressure(*spec.pressure_field, Vec3(0, 0, -100 * ft), 0.0) == 0.0);
}

TEST_CASE("coarse leak-off report")
{
  const auto report = run_benchmark(BenchmarkSpec{BenchmarkName::leakoff, 0.5});
  CHECK(report.solved());
  CHECK(report.cases.size() == 4);
  REQUIRE(report.check("right_edge_nondecreasing_in_depth"));
  CHECK(report.check("right_edge_nondecreasing_in_depth")->holds);
  REQUIRE(report.metric("dry.borehole_mm"));
  CHECK(report.metric("dry.borehole_mm")->value > 0.0);
  CHECK(report.metric("no.such.metric") == nullptr);
}
