#pragma once

#include "pdpore/benchmarks.hpp"
#include "pdpore/problem.hpp"
#include "pdpore/simulation.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pdpore {

// ---------------------------------------------------------------------------
// Configuration
//
// JSON documents. Dimensional values are plain numbers in SI units or
// strings with a unit suffix, e.g. "3.8642 ksi" or "750 ft". Unknown keys
// are rejected. A top-level "benchmark": {"name", "resolution"} starts from
// that benchmark's problem; the remaining keys are merged over it as a JSON
// merge patch (arrays replace whole).

/// Physical dimension expected by a config value.
enum class Dimension
{
  none,
  length,
  stress,
  force,
  force_per_volume,
  time,
  frequency
};

/// Parses "<number> <unit>" into SI. Throws ConfigError(key, ...) for an
/// unknown unit or one of the wrong dimension.
double parse_quantity(std::string_view text, Dimension dimension, const std::string& key);

ProblemSpec parse_config(std::string_view text);
ProblemSpec load_config(const std::filesystem::path& path);

/// Canonical JSON (SI numbers, every field written). parse_config of the
/// result compares equal to `spec`.
std::string serialize_config(const ProblemSpec& spec);

// ---------------------------------------------------------------------------
// Result frames

struct ResultFrame
{
  double time = 0.0;
  std::vector<Vec3> positions;
  std::vector<Vec3> displacements;
  std::vector<double> dilatation;
  std::vector<double> pressure;
  std::vector<double> pore_pressure;
  std::vector<TagMask> tags;

  std::size_t size() const { return positions.size(); }
  /// Throws std::invalid_argument if the columns differ in length.
  void check() const;
};

ResultFrame make_frame(const Model& model, const StepResult& step);

inline constexpr std::string_view csv_header = "id,x0,x1,x2,u0,u1,u2,theta,p,pf,tags";

/// Header plus one record per particle, reals with 17 significant digits.
std::string format_csv(const ResultFrame& frame);
/// Inverse of format_csv. The frame time is not stored in CSV and reads as 0.
ResultFrame parse_csv(std::string_view text);
ResultFrame read_csv(const std::filesystem::path& path);

/// Legacy ASCII VTK polydata (points, vertices and point data).
std::string format_vtk(const ResultFrame& frame);

/// Writes frame `index` as frame_<index, 5 digits>.csv (and .vtk if
/// requested) into an existing directory.
std::vector<std::filesystem::path> write_frame(const ResultFrame& frame, std::size_t index,
                                               const std::filesystem::path& directory, const OutputOptions& options);

/// Writes frame_00000.csv, frame_00001.csv, ... (and .vtk if requested)
/// into `directory`, creating it. Returns the written paths.
std::vector<std::filesystem::path> write_results(const std::vector<ResultFrame>& frames,
                                                 const std::filesystem::path& directory,
                                                 const OutputOptions& options);

// ---------------------------------------------------------------------------
// Benchmark reports

std::string format_report(const BenchmarkReport& report);
std::string report_json(const BenchmarkReport& report);

/// report.txt and report.json in `directory`.
std::vector<std::filesystem::path> write_report(const BenchmarkReport& report, const std::filesystem::path& directory);

/// create_directories with IoError naming the path.
void make_directory(const std::filesystem::path& directory);
/// Writes `content` to `path`; IoError names the path on failure.
void write_file(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

} // namespace pdpore
