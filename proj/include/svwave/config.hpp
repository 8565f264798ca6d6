#ifndef SVWAVE_CONFIG_HPP
#define SVWAVE_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "svwave/lattice.hpp"
#include "svwave/potential.hpp"

namespace svwave {

/// Where the series, snapshots, and summary go.
struct OutputSpec {
  long series_every = 1;    // emit a CSV row when t is a multiple (plus first/last)
  long snapshot_every = 0;  // 0 disables snapshots; else multiples of t, plus last
  std::string out_dir = "out";
};

/// Scan parameters for the well-posedness estimates.
struct StabilityScanSpec {
  double scan_domain = 10.0;
  long grid = 1000;
};

/// strict: require tau < tau2_est, or a verified uniqueness criterion.
/// permissive: require only tau < tau1 (existence regime; uniqueness and
/// energy positivity are not guaranteed and the summary says so).
enum class Admissibility { strict, permissive };

struct InitialSpec {
  enum class Kind { zero, gaussian_pulse, plane_wave, random, file };
  Kind kind = Kind::zero;

  // gaussian_pulse: component 0 of both slices gets the real profile
  // A exp(-|x - center|^2 / (2 width^2)), x_j = X_j * epsilon.
  std::vector<double> center;  // physical coordinates; empty = lattice center
  double width = 1.0;
  double amplitude = 1.0;      // shared with plane_wave

  // plane_wave: integer mode vector, one entry per axis, each in [0, L_j).
  std::vector<long> mode;

  // random: complex Gaussian entries, each slice scaled to this l2 norm.
  double l2_norm = 1.0;

  // file: path to a snapshot sidecar; the run resumes from its step index.
  std::string snapshot;
};

struct RunConfig {
  std::vector<long> dims;
  double epsilon = 1.0;
  Boundary boundary = Boundary::periodic;
  int N = 1;
  std::optional<double> tau;    // exactly one of tau / ratio
  std::optional<double> ratio;  // tau = ratio * epsilon
  long steps = 1;
  double mass = 0.0;
  std::vector<double> coeffs;                    // exactly one of coeffs /
  std::vector<std::vector<double>> site_coeffs;  // site_coeffs
  InitialSpec initial;
  OutputSpec output;
  Admissibility admissibility = Admissibility::strict;
  std::uint64_t seed = 0;
  int workers = 1;
  StabilityScanSpec stability;

  LatticeShape shape() const;
  PolynomialPotential potential() const;
  double resolve_tau() const;
};

/// Parses and validates a config object. Relative snapshot paths are resolved
/// against base_dir. Unknown keys are rejected. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& j, const std::string& base_dir);

/// Reads a config file. A summary JSON written by run() is also accepted: its
/// embedded "config" object is loaded, so a finished run can be replayed by
/// pointing at its summary.
RunConfig load_config(const std::string& path);

/// Fully-resolved config as JSON: tau is emitted (never ratio), snapshot
/// paths are absolute. parse_config on the result reproduces the run.
nlohmann::json config_json(const RunConfig& cfg);

/// Potential sub-object parser ({"mass": m, "coeffs": [...]} or
/// {"mass": m, "site_coeffs": [[...], ...]}); shared with the CLI's
/// check-potential command, which accepts potential-only files.
PolynomialPotential potential_from_json(const nlohmann::json& j);

}  // namespace svwave

#endif
