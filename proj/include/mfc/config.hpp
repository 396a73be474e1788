#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mfc/admm.hpp"
#include "mfc/cases.hpp"

namespace mfc {

struct OutputConfig {
  std::string dir;
  std::vector<double> snapshots;  // requested times; empty = quarter points

  bool operator==(const OutputConfig&) const = default;
};

/// A fully parsed run description: a built-in scenario name or custom
/// gridded data, geometry/cost overrides, solver settings and output
/// options.  parse_config/render_config round-trip exactly.
struct RunConfig {
  // [scenario]
  std::string scenario;  // built-in name; empty when custom files are given
  std::string m0_file;
  std::string ut_file;
  bool normalize = true;
  // [geometry]
  int nh = 16;
  int nt = 16;
  double horizon = 1.0;
  std::optional<GeometryKind> kind;  // overrides the scenario's kind
  std::optional<std::vector<Rect>> obstacles;
  // [cost]
  std::optional<double> alpha, beta, lambda, q;
  // [solver]
  SolverConfig solver;
  // [output]
  OutputConfig output;

  bool operator==(const RunConfig&) const = default;
};

/// Parse the INI-style key=value format with [scenario] [geometry] [cost]
/// [solver] [output] sections.  Unknown keys/sections and malformed values
/// are errors with line numbers; range violations name the key.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);
std::string render_config(const RunConfig& cfg);

/// Everything needed to run: geometry, discrete data, solver config, plus
/// the resolved scenario name for reporting.
struct ResolvedRun {
  Geometry geom;
  DiscreteData data;
  SolverConfig solver;
  OutputConfig output;
  std::string scenario_name;
};

/// Validate and materialize the run (builds geometry, samples the data,
/// applies cost overrides, loads custom CSV grids).  Throws on conflicts
/// (e.g. periodic geometry with obstacles, alpha out of range).
ResolvedRun resolve_run(const RunConfig& cfg);

struct RunOverrides {
  std::string out_dir;  // overrides config/env
  int threads = -1;     // overrides config when >= 0
};

/// Execute a resolved run and write history.csv, density snapshots and
/// summary.txt.  Returns the process exit status: 0 converged, 2 iteration
/// budget exhausted (outputs still written).  Errors throw.
int execute_run(const RunConfig& cfg, const RunOverrides& ov = {});

/// Output directory resolution order: override, config, $MFC_OUT_DIR, ".".
std::string resolve_out_dir(const RunConfig& cfg, const RunOverrides& ov);

}  // namespace mfc
