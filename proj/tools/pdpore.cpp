// pdpore: command-line driver.
//
//   pdpore run --config problem.json [--out DIR]
//   pdpore bench --name lighthouse [--resolution 1] [--out DIR]
//   pdpore validate --config problem.json
//
// Output goes to --out, else $PDPORE_OUTPUT_DIR, else ./pdpore_output.

#include "pdpore/io.hpp"
#include "pdpore/simulation.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>

using namespace pdpore;

namespace {

constexpr int exit_failure = 1;
constexpr int exit_config = 2;

std::filesystem::path output_directory(const std::string& flag)
{
  if (!flag.empty())
    return flag;
  if (const char* env = std::getenv("PDPORE_OUTPUT_DIR"); env && *env)
    return env;
  return "pdpore_output";
}

int run(const std::string& config, const std::string& out)
{
  const ProblemSpec spec = load_config(config);
  Simulation sim(assemble_model(spec), spec.solver);
  const auto dir = output_directory(out);
  make_directory(dir);
  std::printf("%zu particles, %zu bonds, %zu steps\n", sim.model().particles.size(),
              sim.model().neighbors.bond_count(), spec.schedule.steps().size());

  std::size_t index = 0;
  for (double t : spec.schedule.steps()) {
    const StepResult step = sim.solve(t);
    std::printf("step %zu t = %.9g: %s, %d iterations, residual %.3e\n", index, t,
                step.solution.converged ? "converged" : "not converged", step.solution.iterations,
                step.solution.residual_norm);
    if (!step.solution.converged) {
      std::fprintf(stderr, "error: step %zu (t = %.9g) did not converge: %s\n", index, t,
                   step.solution.message.c_str());
      return exit_failure;
    }
    write_frame(make_frame(sim.model(), step), index, dir, spec.output);
    ++index;
  }
  std::printf("wrote %zu frames to %s\n", index, dir.string().c_str());
  return 0;
}

int bench(const std::string& name, double resolution, const std::string& out)
{
  BenchmarkSpec spec;
  try {
    spec.name = benchmark_from_string(name);
  }
  catch (const ConfigError&) {
    throw ConfigError("--name", "unknown benchmark '" + name +
                                  "' (expected lighthouse, harmonic_consolidation, subsidence or leakoff)");
  }
  if (!(resolution > 0.0))
    throw ConfigError("--resolution", "resolution must be positive");
  spec.resolution = resolution;

  const BenchmarkReport report = run_benchmark(spec);
  const auto dir = output_directory(out);
  write_report(report, dir);
  std::cout << format_report(report);
  std::printf("wrote %s and %s\n", (dir / "report.txt").string().c_str(), (dir / "report.json").string().c_str());
  if (!report.solved()) {
    std::fprintf(stderr, "error: at least one case failed to solve\n");
    return exit_failure;
  }
  return 0;
}

int validate(const std::string& config)
{
  const ProblemSpec spec = load_config(config);
  std::printf("%s: valid (%zu tags, %zu fixed, %zu loads, %zu steps, horizon %.9g)\n", config.c_str(),
              spec.tags.size(), spec.bcs.fixed.size(), spec.bcs.loads.size(), spec.schedule.steps().size(),
              spec.horizon_length());
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Peridynamic poroelastic solver"};
  app.require_subcommand(1);

  std::string config, out, name;
  double resolution = 1.0;

  auto* run_cmd = app.add_subcommand("run", "Solve the problem in a JSON config and write result frames");
  run_cmd->add_option("--config", config, "Problem config (JSON)")->required();
  run_cmd->add_option("--out", out, "Output directory");

  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark and write its report");
  bench_cmd->add_option("--name", name, "lighthouse, harmonic_consolidation, subsidence or leakoff")->required();
  bench_cmd->add_option("--resolution", resolution, "Lattice refinement multiplier");
  bench_cmd->add_option("--out", out, "Output directory");

  auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a config without solving");
  validate_cmd->add_option("--config", config, "Problem config (JSON)")->required();

  try {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  }
  catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  }
  catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return e.get_exit_code() != 0 ? e.get_exit_code() : exit_config;
  }

  try {
    if (*run_cmd)
      return run(config, out);
    if (*bench_cmd)
      return bench(name, resolution, out);
    return validate(config);
  }
  catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  }
  catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return exit_config;
  }
  catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_failure;
  }
}
