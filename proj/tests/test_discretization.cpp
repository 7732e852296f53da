#include "support.hpp"

#include <doctest.h>

#include <numbers>

using namespace pdpore;

TEST_CASE("unit cube at h = 0.5 gives 8 particles of volume 0.125")
{
  LatticeSpec spec;
  spec.spacing = Vec3::Constant(0.5);
  const auto p = build_lattice(spec);
  REQUIRE(p.size() == 8);
  for (double v : p.volumes)
    CHECK(v == 0.125);
  CHECK(p.positions.front().isApprox(Vec3(0.25, 0.25, 0.25)));
}

TEST_CASE("column cells of 0.0015625 m^3 fill 25 m^3 exactly")
{
  LatticeSpec spec;
  spec.lo = Vec3(0, 0, -20);
  spec.hi = Vec3(1, 1, 5);
  spec.spacing = Vec3(0.125, 0.125, 0.1);
  const auto p = build_lattice(spec);
  CHECK(spec.cell_volume() == doctest::Approx(0.0015625).epsilon(1e-14));
  CHECK(p.size() == 64u * 250u);
  CHECK(p.total_volume() == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("exclusion that swallows the domain is an error")
{
  LatticeSpec spec;
  spec.spacing = Vec3::Constant(0.5);
  spec.exclusion = CylinderExclusion{2, Vec3::Zero(), 10.0};
  CHECK_THROWS_AS(build_lattice(spec), ConfigError);
}

TEST_CASE("exclusion removes cells whose centre is inside the cylinder")
{
  LatticeSpec spec;
  spec.hi = Vec3(1, 1, 0.1);
  spec.exclusion = CylinderExclusion{2, Vec3::Zero(), 0.3};
  const auto p = build_lattice(spec);
  std::size_t expected = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      expected += std::hypot(0.05 + 0.1 * i, 0.05 + 0.1 * j) >= 0.3 ? 1 : 0;
  CHECK(p.size() == expected);
  for (const auto& x : p.positions)
    CHECK(x.head<2>().norm() >= 0.3);
}

TEST_CASE("lattice validation names the key")
{
  LatticeSpec spec;
  spec.spacing = Vec3(0.1, -0.1, 0.1);
  try {
    spec.validate();
    FAIL("expected ConfigError");
  }
  catch (const ConfigError& e) {
    CHECK(e.key() == "lattice.spacing");
  }
}

TEST_CASE("horizon is a closed ball")
{
  ParticleSet p;
  p.positions = {Vec3::Zero(), Vec3(0.3, 0.4, 0.0)};
  p.volumes = {1.0, 1.0};
  p.tags = {0, 0};
  const double d = 0.5;
  auto nl = build_neighbors(p, d);
  CHECK(nl.count(0) == 1);
  CHECK(nl.count(1) == 1);
  nl = build_neighbors(p, 0.99 * d);
  CHECK(nl.count(0) == 0);
  CHECK(nl.count(1) == 0);
}

TEST_CASE("binned search matches a brute-force scan")
{
  SUBCASE("interior of a 9^3 patch, delta = 3.5 h")
  {
    LatticeSpec spec;
    spec.hi = Vec3::Constant(0.9);
    const auto p = build_lattice(spec);
    const auto nl = build_neighbors(p, 0.35);
    CHECK(pdtest::listed_pairs(nl) == pdtest::brute_force_pairs(p.positions, 0.35));
    const std::size_t centre = 4 * 81 + 4 * 9 + 4;
    std::size_t count = 0;
    for (std::size_t j = 0; j < p.size(); ++j)
      count += (j != centre && (p.positions[j] - p.positions[centre]).norm() <= 0.35 * (1 + 1e-12)) ? 1 : 0;
    CHECK(nl.count(centre) == count);
  }
  SUBCASE("ties straddling a bin boundary")
  {
    LatticeSpec spec;
    spec.hi = Vec3::Constant(1.0);
    spec.spacing = Vec3::Constant(1.0 / 15);
    const auto p = build_lattice(spec);
    const auto nl = build_neighbors(p, 3.0 / 15);
    CHECK(pdtest::listed_pairs(nl) == pdtest::brute_force_pairs(p.positions, 3.0 / 15));
  }
  SUBCASE("random cloud")
  {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    ParticleSet p;
    for (int k = 0; k < 600; ++k) {
      p.positions.emplace_back(d(rng), d(rng), 0.3 * d(rng));
      p.volumes.push_back(1e-3);
      p.tags.push_back(0);
    }
    for (double h : {0.05, 0.13, 0.4}) {
      const auto nl = build_neighbors(p, h);
      CHECK(pdtest::listed_pairs(nl) == pdtest::brute_force_pairs(p.positions, h));
    }
  }
}

TEST_CASE("neighbour lists are sorted and reverse bonds line up")
{
  LatticeSpec spec;
  spec.hi = Vec3(1.0, 0.6, 0.4);
  const auto p = build_lattice(spec);
  const auto nl = build_neighbors(p, 0.3);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto js = nl.neighbors(i);
    CHECK(std::is_sorted(js.begin(), js.end()));
    for (std::size_t b = nl.offsets[i]; b < nl.offsets[i + 1]; ++b) {
      const std::size_t r = nl.reverse[b];
      CHECK(nl.indices[r] == i);
      CHECK(nl.bond_length[r] == nl.bond_length[b]);
      CHECK(nl.bond_length[b] == doctest::Approx((p.positions[nl.indices[b]] - p.positions[i]).norm()));
    }
  }
}

TEST_CASE("weighted volume")
{
  SUBCASE("single bond")
  {
    ParticleSet p;
    p.positions = {Vec3::Zero(), Vec3(0.2, 0, 0)};
    p.volumes = {0.5, 0.7};
    p.tags = {0, 0};
    const auto nl = build_neighbors(p, 0.25);
    const auto wv = weighted_volume(p, nl, Influence{Influence::Kind::unit, 0.25});
    CHECK(wv.m[0] == doctest::Approx(0.04 * 0.7));
    CHECK(wv.m[1] == doctest::Approx(0.04 * 0.5));
    CHECK(wv.isolated.empty());
  }
  SUBCASE("empty neighbourhood is flagged")
  {
    ParticleSet p;
    p.positions = {Vec3::Zero(), Vec3(1, 0, 0)};
    p.volumes = {1, 1};
    p.tags = {0, 0};
    const auto nl = build_neighbors(p, 0.5);
    const auto wv = weighted_volume(p, nl, Influence{});
    CHECK(wv.m[0] == 0.0);
    CHECK(wv.isolated == std::vector<Index>{0, 1});
  }
  SUBCASE("interior value approaches 4 pi delta^5 / 5")
  {
    const double delta = 1.0;
    const double exact = 4.0 * std::numbers::pi * std::pow(delta, 5) / 5.0;
    double previous_error = 1.0;
    for (int ratio : {4, 8, 12}) {
      const double h = delta / ratio;
      const int n = 2 * ratio + 3;
      LatticeSpec spec;
      spec.hi = Vec3::Constant(n * h);
      spec.spacing = Vec3::Constant(h);
      const auto p = build_lattice(spec);
      const auto nl = build_neighbors(p, delta);
      const auto wv = weighted_volume(p, nl, Influence{Influence::Kind::unit, delta});
      const std::size_t centre = (n / 2) * n * n + (n / 2) * n + n / 2;
      const double error = std::abs(wv.m[centre] - exact) / exact;
      CHECK(error < previous_error);
      previous_error = error;
    }
    CHECK(previous_error < 0.03);
  }
}

TEST_CASE("influence functions")
{
  const Influence unit{Influence::Kind::unit, 2.0};
  CHECK(unit(0.3) == 1.0);
  CHECK(unit(1.7) == 1.0);
  const Influence inv{Influence::Kind::inverse_distance, 2.0};
  CHECK(inv(2.0) == 1.0);
  CHECK(inv(0.7) == inv(0.7));
  CHECK(influence_kind_from_string("inverse_distance") == Influence::Kind::inverse_distance);
  CHECK_THROWS_AS(influence_kind_from_string("gaussian"), ConfigError);
}

TEST_CASE("tags")
{
  ParticleSet p;
  p.positions = {Vec3::Zero(), Vec3::Ones()};
  p.volumes = {1, 1};
  p.tags = {0, 0};
  const int a = p.add_tag("a");
  CHECK(p.add_tag("a") == a);
  CHECK(p.tag_index("b") == -1);
  p.tags[1] |= 1u << a;
  CHECK(p.tagged(a) == std::vector<Index>{1});
}
