#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gkdv/evolve.hpp"
#include "gkdv/scattering.hpp"
#include "gkdv/spectral.hpp"

namespace gkdv {

struct InitialData {
  enum class Kind { gaussian, soliton, file };
  Kind kind = Kind::gaussian;
  double amplitude = 0.5;
  double center = 0.0;
  double width = 1.0;
  double speed = 1.0;
  /// Snapshot header for kind == file.
  std::string path;
};

const char* to_string(InitialData::Kind k) noexcept;

struct DiagnosticsToggles {
  bool vector_fields = true;
  bool residuals = true;
};

struct RunConfig {
  std::size_t n = 1024;
  double length = 64.0;
  ModelParams model;
  /// Absent = chosen from the initial data.
  std::optional<double> dt;
  double cfl_safety = 0.2;
  int oversample = 2;
  Scheme scheme = Scheme::etdrk4;
  double horizon = 10.0;
  /// Absent = at least 200 stored intervals.
  std::optional<std::size_t> store_stride;
  InitialData initial;
  DiagnosticsToggles diagnostics;
  /// Absent = midpoint default.
  std::optional<double> kappa;
  double theta = 1.5;
  double theta_decay = 1.05;
  double decay_tolerance = 0.1;
  double fit_start = 5.0;
  std::uint64_t seed = 20240501;
  std::string output = "run";

  /// Non-fatal remarks collected while parsing (e.g. alpha outside 8/5 < alpha < 2).
  std::vector<std::string> warnings;

  GridSpec grid() const { return GridSpec(n, length); }
  StepperConfig stepper() const;
  CriteriaOptions criteria() const;
};

/// Parses and validates a JSON document, filling defaults. Unknown keys and
/// out-of-range values raise ConfigError naming the offending path.
RunConfig parse_config(const std::string& document);
RunConfig load_config(const std::string& path);

/// The fully resolved configuration as JSON text (every default spelled out).
std::string config_to_json(const RunConfig& cfg);

/// Samples the configured initial data on the configured grid.
RealField make_initial_data(const RunConfig& cfg);

}  // namespace gkdv
