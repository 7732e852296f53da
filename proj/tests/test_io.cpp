#include "pdpore/io.hpp"

#include <doctest.h>

#include <random>

using namespace pdpore;

namespace {

std::string config_error_key(const std::string& text)
{
  try {
    parse_config(text);
  }
  catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

const char* minimal_column = R"({
  "lattice": {"lo": [0, 0, 0], "hi": [1, 1, 2], "spacing": 0.25},
  "material": {"bulk_modulus": "9 GPa", "shear_modulus": "15 GPa"},
  "tags": [{"name": "base", "select": {"type": "layer", "axis": 2, "side": "low"}}],
  "boundary_conditions": {"fixed": [{"tag": "base", "axis": 2}]}
})";

std::filesystem::path scratch_dir(const std::string& name)
{
  auto dir = std::filesystem::temp_directory_path() / ("pdpore_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

} // namespace

TEST_CASE("quantities with units")
{
  CHECK(parse_quantity("750 ft", Dimension::length, "k") == doctest::Approx(228.6));
  CHECK(parse_quantity("3.8642 ksi", Dimension::stress, "k") == doctest::Approx(3.8642 * 6894757.293168361));
  CHECK(parse_quantity("-150 psi", Dimension::stress, "k") == doctest::Approx(-150 * 6894.757293168361));
  CHECK(parse_quantity("25.67 kN/m^3", Dimension::force_per_volume, "k") == doctest::Approx(25670));
  CHECK(parse_quantity("29.7GPa", Dimension::stress, "k") == 29.7e9);
  CHECK(parse_quantity("0.4 s", Dimension::time, "k") == 0.4);
  CHECK(parse_quantity("2.5", Dimension::none, "k") == 2.5);
  CHECK_THROWS_AS(parse_quantity("3 ft", Dimension::stress, "k"), ConfigError);
  CHECK_THROWS_AS(parse_quantity("3 furlongs", Dimension::length, "k"), ConfigError);
  CHECK_THROWS_AS(parse_quantity("GPa", Dimension::stress, "k"), ConfigError);
  CHECK_THROWS_AS(parse_quantity("1 m", Dimension::none, "k"), ConfigError);
}

TEST_CASE("minimal dry column config")
{
  const auto spec = parse_config(minimal_column);
  CHECK_FALSE(spec.pressure_field);
  CHECK(spec.material.bulk_modulus == 9e9);
  CHECK(spec.lattice.spacing == Vec3::Constant(0.25));
  CHECK(spec.horizon == HorizonSpec{});
  CHECK(spec.bcs.fixed.size() == 1);
}

TEST_CASE("config diagnostics name the key")
{
  CHECK(config_error_key(R"({"lattice": {"lo": [0,0,0], "hi": [1,1,1], "spacing": 0.5}, "material": {"bulk_modulus": 1,
        "shear_modulus": 1}, "materials": {}})") == "materials");
  CHECK(config_error_key(R"({"lattice": {"lo": [0,0,0], "hi": [1,1,1], "spacing": 0.5, "step": 1}, "material":
        {"bulk_modulus": 1, "shear_modulus": 1}})") == "lattice.step");
  CHECK(config_error_key(R"({"lattice": {"lo": [0,0,0], "hi": [1,1,1], "spacing": 0.5}, "material": {"bulk_modulus":
        "1 ft", "shear_modulus": 1}})") == "material.bulk_modulus");
  CHECK(config_error_key(R"({"lattice": {"lo": [0,0,0], "hi": [1,1,1], "spacing": 0.5}, "material":
        {"bulk_modulus": 1}})") == "material.shear_modulus");
  CHECK(config_error_key(R"({"lattice": {"lo": [0,0,0], "hi": [1,1,1], "spacing": 0.5}, "material": {"bulk_modulus": 1,
        "shear_modulus": 1}, "boundary_conditions": {"fixed": [{"tag": "missing", "axis": 0}]}})") ==
        "boundary_conditions.fixed[0].tag");
  CHECK(config_error_key(R"({"lattice": {"lo": [0,0,0], "hi": [1,1,1], "spacing": 0.5}, "material": {"bulk_modulus": 1,
        "shear_modulus": 1}, "tags": [{"name": "a", "select": {"type": "sphere"}}]})") == "tags[0].select.type");
  CHECK(config_error_key("{not json") == "config");
  CHECK(config_error_key(R"({"benchmark": {"name": "terzaghi"}})") == "benchmark.name");
}

TEST_CASE("biot mode with K above K_solid names the gamma bound")
{
  try {
    parse_config(R"({"benchmark": {"name": "lighthouse"},
      "effective_stress": {"mode": "biot", "drained_bulk_modulus": "10 GPa", "solid_bulk_modulus": "5 GPa"}})");
    FAIL("expected ConfigError");
  }
  catch (const ConfigError& e) {
    CHECK(e.key() == "effective_stress");
    CHECK(std::string(e.what()).find("gamma") != std::string::npos);
  }
}

TEST_CASE("benchmark config equals the benchmark problem")
{
  CHECK(parse_config(R"({"benchmark": {"name": "lighthouse"}})") == benchmark_problem(BenchmarkName::lighthouse));
  const auto lh = parse_config(R"({"benchmark": {"name": "lighthouse"}})");
  CHECK(lh.material.bulk_modulus == 9e9);
  CHECK(lh.material.shear_modulus == 15e9);
  CHECK(lh.horizon.value == 5.0);

  const auto sub = parse_config(R"({"benchmark": {"name": "subsidence", "resolution": 1},
    "material": {"shear_modulus": "3846.2 ksi"}})");
  CHECK(sub.material.shear_modulus == doctest::Approx(3846.2 * 6894757.293168361));
  CHECK(sub.material.bulk_modulus == benchmark_problem(BenchmarkName::subsidence).material.bulk_modulus);
}

TEST_CASE("config round trip")
{
  for (auto name : {BenchmarkName::lighthouse, BenchmarkName::harmonic_consolidation, BenchmarkName::subsidence,
                    BenchmarkName::leakoff}) {
    const auto spec = benchmark_problem(name);
    CHECK(parse_config(serialize_config(spec)) == spec);
  }
  auto spec = parse_config(minimal_column);
  spec.solver.linearization = Linearization::fixed_point_M;
  spec.output.vtk = true;
  spec.horizon = HorizonSpec{HorizonSpec::Kind::absolute, 0.61};
  spec.effective_stress = EffectiveStressParams{EffectiveStressParams::Mode::biot, 3e9, 9e9, 1.0};
  spec.body_force = SpecificWeight{1, 12.5};
  spec.bcs.loads = {PointLoad{"base", PointLoad::Kind::radial, Vec3::Zero(), 5.0, 2, Vec3(0.5, 0.5, 0),
                              ProductScale{{TableScale{{0, 1}, {0, 1}}, OneMinusCosScale{2, 3}}}}};
  CHECK(parse_config(serialize_config(spec)) == spec);
}

TEST_CASE("CSV")
{
  SUBCASE("zero state")
  {
    ResultFrame frame;
    frame.positions = {Vec3::Zero()};
    frame.displacements = {Vec3::Zero()};
    frame.dilatation = frame.pressure = frame.pore_pressure = {0.0};
    frame.tags = {0};
    CHECK(format_csv(frame) == "id,x0,x1,x2,u0,u1,u2,theta,p,pf,tags\n0,0,0,0,0,0,0,0,0,0,0\n");
  }
  SUBCASE("round trip is bitwise")
  {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> d(-1e3, 1e3);
    ResultFrame frame;
    for (int i = 0; i < 50; ++i) {
      frame.positions.emplace_back(d(rng), d(rng), 1e-300 * d(rng));
      frame.displacements.emplace_back(d(rng) * 1e-7, std::nextafter(0.1, 1.0), -d(rng));
      frame.dilatation.push_back(d(rng) / 3.0);
      frame.pressure.push_back(1e200 * d(rng));
      frame.pore_pressure.push_back(d(rng));
      frame.tags.push_back(static_cast<TagMask>(i * 977));
    }
    const auto back = parse_csv(format_csv(frame));
    CHECK(back.positions == frame.positions);
    CHECK(back.displacements == frame.displacements);
    CHECK(back.dilatation == frame.dilatation);
    CHECK(back.pressure == frame.pressure);
    CHECK(back.pore_pressure == frame.pore_pressure);
    CHECK(back.tags == frame.tags);
  }
  SUBCASE("malformed input")
  {
    CHECK_THROWS_AS(parse_csv("id,x\n"), IoError);
    CHECK_THROWS_AS(parse_csv("id,x0,x1,x2,u0,u1,u2,theta,p,pf,tags\n0,1,2\n"), IoError);
    CHECK_THROWS_AS(parse_csv("id,x0,x1,x2,u0,u1,u2,theta,p,pf,tags\n0,0,0,0,0,0,0,0,0,0,zz\n"), IoError);
  }
}

TEST_CASE("result files")
{
  const auto dir = scratch_dir("frames");
  std::vector<ResultFrame> frames(3);
  for (std::size_t k = 0; k < frames.size(); ++k) {
    auto& f = frames[k];
    f.time = 0.5 * static_cast<double>(k);
    f.positions = {Vec3::Zero(), Vec3(1, 0, 0)};
    f.displacements = {Vec3(static_cast<double>(k), 0, 0), Vec3::Zero()};
    f.dilatation = f.pressure = f.pore_pressure = {0.0, 1.0};
    f.tags = {1, 2};
  }
  const auto written = write_results(frames, dir, OutputOptions{true, true});
  CHECK(written.size() == 6);
  std::size_t csv = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    csv += entry.path().extension() == ".csv" ? 1 : 0;
  CHECK(csv == 3);
  CHECK(std::filesystem::exists(dir / "frame_00002.csv"));
  CHECK(read_csv(dir / "frame_00002.csv").displacements[0][0] == 2.0);

  const std::string vtk = read_file(dir / "frame_00001.vtk");
  CHECK(vtk.rfind("# vtk DataFile Version 3.0\n", 0) == 0);
  CHECK(vtk.find("DATASET POLYDATA\nPOINTS 2 double\n") != std::string::npos);
  CHECK(vtk.find("VERTICES 2 4\n") != std::string::npos);
  CHECK(vtk.find("POINT_DATA 2\nVECTORS displacement double\n1 0 0\n0 0 0\n") != std::string::npos);
  CHECK(vtk.find("SCALARS pf double 1\nLOOKUP_TABLE default\n0\n1\n") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("unwritable path reports the path")
{
  const auto dir = scratch_dir("blocked");
  write_file(dir.string() + "_file", "x");
  const std::filesystem::path blocked = dir.string() + "_file";
  try {
    write_results({ResultFrame{}}, blocked / "sub", OutputOptions{});
    FAIL("expected IoError");
  }
  catch (const IoError& e) {
    CHECK(std::string(e.what()).find(blocked.string()) != std::string::npos);
  }
  try {
    read_csv(dir / "missing.csv");
    FAIL("expected IoError");
  }
  catch (const IoError& e) {
    CHECK(std::string(e.what()).find("missing.csv") != std::string::npos);
  }
  std::filesystem::remove(blocked);
}

TEST_CASE("report formats")
{
  BenchmarkReport report;
  report.name = "demo";
  report.notes = {"a note"};
  report.cases = {CaseSummary{"case", 10, 40, 1, true, 12, 1e-9, ""}};
  report.probes = {Probe{"s", 0.5, 1.25, 1.5, "closed form"}, Probe{"s", 1.0, 2.0, std::nullopt, ""}};
  report.metrics = {Metric{"err", 0.1}};
  report.checks = {PropertyCheck{"ok", true, "detail"}};
  const auto text = format_report(report);
  CHECK(text.find("benchmark demo") != std::string::npos);
  CHECK(text.find("err = 0.1") != std::string::npos);
  CHECK(text.find("ok: holds (detail)") != std::string::npos);
  const auto json = report_json(report);
  CHECK(json.find("\"reference\": null") != std::string::npos);
  CHECK(json.find("\"benchmark\": \"demo\"") != std::string::npos);
  CHECK(report_json(report) == json);
}
