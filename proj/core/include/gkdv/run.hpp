#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gkdv/config.hpp"
#include "gkdv/evolve.hpp"
#include "gkdv/scattering.hpp"

namespace gkdv {

/// Root for relative output paths: $GKDVLAB_OUTPUT_ROOT, else the working directory.
std::filesystem::path output_root();
std::filesystem::path resolve_output(const std::string& output);

/// 17 significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double v);

/// Values derived from a configuration, as decimal strings in a fixed order.
using DerivedValues = std::vector<std::pair<std::string, std::string>>;
DerivedValues derived_values(const RunConfig& cfg);

struct SimulateResult {
  std::filesystem::path dir;
  std::size_t slices = 0;
  bool blowup = false;
  std::string blowup_reason;
};

/// Evolves the configured data and writes manifest.json plus one snapshot per stored slice.
SimulateResult run_simulate(const RunConfig& cfg);

struct LoadedRun {
  RunConfig config;
  Trajectory trajectory;
};

/// Reads a run directory, recomputing the derived values and checking them
/// against the manifest. IntegrityError on any mismatch or missing file.
LoadedRun load_run(const std::filesystem::path& dir);

/// Writes diagnostics.csv, diagnostics_schema.json and summary.json into dir.
std::filesystem::path run_diagnose(const std::filesystem::path& dir);

/// Writes report.json into dir.
std::filesystem::path run_criteria(const std::filesystem::path& dir, std::optional<double> kappa = std::nullopt);

/// Runs one Gaussian per amplitude and writes sweep_summary.csv into the configured output directory.
std::filesystem::path run_sweep(const RunConfig& cfg, const std::vector<double>& amplitudes, unsigned workers = 0);

struct CsvColumn {
  const char* name;
  const char* description;
};

const std::vector<CsvColumn>& diagnostics_columns();
const std::vector<CsvColumn>& sweep_columns();

}  // namespace gkdv
