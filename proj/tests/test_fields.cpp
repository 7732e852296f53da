#include "pdpore/benchmarks.hpp"
#include "pdpore/fields.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace pdpore;

TEST_CASE("scale functions")
{
  CHECK(evaluate_scale(ConstantScale{2.5}, 9.0) == 2.5);
  const LinearScale ramp{1.0, 0.0, 3.0, 4.0};
  CHECK(evaluate_scale(ramp, 0.0) == 0.0);
  CHECK(evaluate_scale(ramp, 2.0) == 2.0);
  CHECK(evaluate_scale(ramp, 5.0) == 4.0);
  const OneMinusCosScale wave{50.0, 75.0};
  CHECK(evaluate_scale(wave, 0.0) == 0.0);
  CHECK(evaluate_scale(wave, std::numbers::pi / 75.0) == doctest::Approx(100.0));
  const TableScale table{{0.0, 1.0, 2.0}, {0.0, 10.0, 0.0}};
  CHECK(evaluate_scale(table, 0.5) == 5.0);
  CHECK(evaluate_scale(table, 1.5) == 5.0);
  CHECK(evaluate_scale(table, 7.0) == 0.0);
  const ProductScale product{{ConstantScale{3.0}, ramp}};
  CHECK(evaluate_scale(product, 2.0) == 6.0);
  CHECK_THROWS_AS(validate_scale(LinearScale{1.0, 0.0, 1.0, 1.0}, "s"), ConfigError);
  CHECK_THROWS_AS(validate_scale(TableScale{{0.0, 0.0}, {1.0, 1.0}}, "s"), ConfigError);
}

TEST_CASE("axial ramp midpoint")
{
  const double P = 8.0, L = 10.0;
  const AxialRamp ramp{0, 0.0, P, L, 0.0};
  CHECK(evaluate_pressure(ramp, Vec3(L / 2, 3, 3), 0.0) == doctest::Approx(P / 2));
  CHECK(evaluate_pressure(ramp, Vec3(-1, 0, 0), 0.0) == P);
  CHECK(evaluate_pressure(ramp, Vec3(L + 1, 0, 0), 0.0) == 0.0);
}

TEST_CASE("radial ramp with a layer")
{
  RadialRamp ramp;
  ramp.r_in = 1.0;
  ramp.p_in = 10.0;
  ramp.r_out = 3.0;
  ramp.p_out = 0.0;
  ramp.layer = Interval{-1.0, 1.0};
  CHECK(evaluate_pressure(ramp, Vec3(2, 0, 0), 0.0) == doctest::Approx(5.0));
  CHECK(evaluate_pressure(ramp, Vec3(0, 0.5, 0), 0.0) == 10.0);
  CHECK(evaluate_pressure(ramp, Vec3(2, 0, 2), 0.0) == 0.0);
}

TEST_CASE("hydrostatic pressure grows with depth below the datum")
{
  const Hydrostatic h{2, 0.0, 10.02e3};
  CHECK(evaluate_pressure(h, Vec3(0, 0, -20), 0.0) == doctest::Approx(20 * 10.02e3));
  CHECK(evaluate_pressure(h, Vec3(0, 0, 0), 0.0) == 0.0);
  CHECK(evaluate_pressure(h, Vec3(0, 0, 3), 0.0) < 0.0);
}

TEST_CASE("harmonic pore-pressure field")
{
  const HarmonicParams params;
  const auto spec = harmonic_problem(params, true);
  REQUIRE(spec.pressure_field);
  const auto& field = *spec.pressure_field;
  const double top = spec.lattice.hi[2];
  for (double t : {0.01, 0.1, 0.2, 0.33})
    CHECK(evaluate_pressure(field, Vec3(0.5, 0.5, top), t) == doctest::Approx(0.0));
  for (double z : {-10.0, -7.0, -2.0})
    CHECK(evaluate_pressure(field, Vec3(0.5, 0.5, z), params.tau) == doctest::Approx(0.0));
  const double t = 0.1;
  CHECK(evaluate_pressure(field, Vec3(0.5, 0.5, -params.length), t) ==
        doctest::Approx(harmonic_pore_pressure(t, params)));
}

TEST_CASE("Darcy velocity")
{
  CHECK(darcy_velocity(Vec3::Zero(), 2.0, Vec3::Zero()) == Vec3::Zero());
  const double alpha = 3.0;
  CHECK(darcy_velocity(Vec3(alpha, 0, 0), alpha, Vec3::Zero()).isApprox(Vec3(-1, 0, 0)));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-10, 10);
  for (int k = 0; k < 20; ++k) {
    const Vec3 g(d(rng), d(rng), d(rng));
    const double a = 0.1 + std::abs(d(rng));
    const Vec3 v = darcy_velocity(g, a, Vec3::Zero());
    for (int c = 0; c < 3; ++c)
      CHECK(a * v[c] == doctest::Approx(-g[c]));
  }
  CHECK_THROWS_AS(darcy_velocity(Vec3::Zero(), 0.0, Vec3::Zero()), ConfigError);
}

TEST_CASE("body forces")
{
  const double rho = 1800.0;
  CHECK(evaluate_body_force(ConstantBodyForce{Vec3(0, 0, -9.81 * rho)}, Vec3(1, 2, 3), 0.0) ==
        Vec3(0, 0, -9.81 * rho));
  CHECK(evaluate_body_force(ConstantBodyForce{}, Vec3::Zero(), 0.0) == Vec3::Zero());
  const Vec3 w = evaluate_body_force(SpecificWeight{0, 25.67e3}, Vec3::Zero(), 0.0);
  CHECK(w.norm() == doctest::Approx(25.67e3));
  CHECK(w[0] < 0.0);
}

TEST_CASE("load schedule")
{
  const auto s = LoadSchedule::uniform(0.0, 0.4, 200);
  REQUIRE(s.times.size() == 200);
  CHECK(s.times.front() == doctest::Approx(0.002));
  CHECK(s.times.back() == 0.4);
  CHECK(LoadSchedule{}.steps() == std::vector<double>{0.0});
  CHECK_THROWS_AS((LoadSchedule{{0.2, 0.1}}.validate()), ConfigError);
  CHECK_THROWS_AS(LoadSchedule::uniform(0.0, 1.0, 0), ConfigError);
}
