#ifndef SVWAVE_SNAPSHOT_HPP
#define SVWAVE_SNAPSHOT_HPP

#include <string>

#include "svwave/lattice.hpp"

namespace svwave {

/// Writes both slices of `state` as raw little-endian binary64 files
/// (interleaved Re, Im per component, row-major site order) named
/// <stem>_prev.f64 / <stem>_curr.f64 under `dir`, plus a JSON sidecar
/// <stem>.json holding {n, dims, N, epsilon, tau, step_index, boundary,
/// prev_file, curr_file}. Returns the sidecar path.
std::string write_snapshot(const std::string& dir, const std::string& stem,
                           const SimState& state);

/// Rebuilds a SimState from a sidecar written by write_snapshot. Data file
/// paths are resolved relative to the sidecar's directory. Restarting from a
/// snapshot reproduces the original run bit for bit.
SimState read_snapshot(const std::string& sidecar_path);

}  // namespace svwave

#endif
