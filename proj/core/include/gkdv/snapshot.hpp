#pragma once

#include <filesystem>
#include <string>

#include "gkdv/evolve.hpp"

namespace gkdv {

struct Snapshot {
  SimState state;
  ModelParams model;
};

/// Writes `<stem>.json` (n, L, t, model, endianness, dtype, samples file) and
/// `<stem>.bin` (n little-endian float64 samples) into dir.
void write_snapshot(const std::filesystem::path& dir, const std::string& stem, const SimState& s,
                    const ModelParams& model);

/// Reads a snapshot from its JSON header; IntegrityError on any inconsistency.
Snapshot read_snapshot(const std::filesystem::path& header);

}  // namespace gkdv
