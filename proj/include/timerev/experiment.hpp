#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "timerev/optics.hpp"
#include "timerev/params.hpp"

namespace timerev {

enum class ExperimentKind { young, focus, modes_audit };
enum class RunMode { forward, reversed, analytic, compare };

struct SweepAxis {
  std::string axis;  // "x0" (young), "r0" or "z0" (focus)
  double start;
  double stop;
  std::size_t count;

  std::vector<double> points() const;
};

struct SweepSpec {
  SweepAxis first;
  std::optional<SweepAxis> second;
};

// Sampling of the numerically propagated plane: slit plane for young, source plane for focus.
struct GridSpec {
  std::size_t n;
  double dx;
};

// Lengths in meters.
struct PhysicalParams {
  double lambda = 0.0;
  double f = 0.0;
  double D = 0.0;
  double x1 = 0.0;
  std::optional<double> slit_width;
  double L1 = 3.24;
  double L2 = 3.24;
  // Fixed source offsets used when the sweep does not cover that axis.
  double z0 = 0.0;
  double r0 = 0.0;
};

struct AuditSpec {
  std::size_t n = 0;
  std::size_t trials = 0;
};

struct ExperimentConfig {
  ExperimentKind experiment;
  RunMode mode = RunMode::compare;
  PhysicalParams params;
  std::optional<SweepSpec> sweep;
  std::optional<GridSpec> grid;
  std::uint64_t seed = 0;
  std::string output;
  AuditSpec audit;
  // Replaces the built-in time-reversed train in reversed mode. Must end in a pinhole.
  std::optional<OpticalTrain> train;
};

struct Diagnostic {
  std::string field;
  std::string message;
};

// Every problem found in a JSON config, with dotted field paths. Empty means runnable.
std::vector<Diagnostic> validate(const nlohmann::json& config);

// Throws ConfigError listing all diagnostics.
ExperimentConfig parse_config(const nlohmann::json& config);

struct RunOptions {
  bool raw = false;
};

struct RunResult {
  std::string csv;
  nlohmann::json summary;
  // Set when a modes audit exceeds its tolerance.
  bool audit_failed = false;
};

// Evaluates the sweep and renders CSV plus a JSON summary. Sweep points of numeric modes
// are snapped to the nearest grid sample and reported at the snapped position.
// Throws ConfigError, SamplingError or NumericalError.
RunResult run(const ExperimentConfig& config, const RunOptions& options = {});

}  // namespace timerev
