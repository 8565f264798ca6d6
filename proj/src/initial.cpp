#include "svwave/initial.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "svwave/numeric.hpp"
#include "svwave/snapshot.hpp"

namespace svwave {

namespace {

// integer coordinates of a flat site index (row-major, last axis fastest)
std::vector<long> site_coords(const LatticeShape& shape, long site) {
  std::vector<long> x(shape.n);
  long rest = site;
  for (int d = shape.n - 1; d >= 0; --d) {
    x[d] = rest % shape.dims[d];
    rest /= shape.dims[d];
  }
  return x;
}

InitialData from_snapshot(const InitialSpec& spec, const LatticeShape& shape,
                          int N, double tau) {
  SimState snap = read_snapshot(spec.snapshot);
  if (!(snap.shape == shape))
    throw ConfigError("initial.file: snapshot lattice does not match the run's "
                      "shape");
  if (snap.curr.N != N)
    throw ConfigError("initial.file: snapshot has " +
                      std::to_string(snap.curr.N) + " components, run expects " +
                      std::to_string(N));
  if (snap.tau != tau)
    throw ConfigError("initial.file: snapshot tau differs from the run's tau; "
                      "a bit-exact resume needs the identical mesh");
  InitialData out;
  out.psi0 = std::move(snap.prev);
  out.psi1 = std::move(snap.curr);
  out.step_index = snap.step_index;
  return out;
}

}  // namespace

double dispersion_omega(const LatticeShape& shape, const std::vector<long>& mode,
                        double mass, double tau) {
  if (mode.size() != static_cast<std::size_t>(shape.n))
    throw ConfigError("dispersion: mode must have one entry per axis");
  for (int d = 0; d < shape.n; ++d)
    if (mode[d] < 0 || mode[d] >= shape.dims[d])
      throw ConfigError("dispersion: mode entries must lie in [0, L_j)");
  if (!(tau > 0.0)) throw ConfigError("dispersion: tau must be > 0");
  const double eps2 = shape.epsilon * shape.epsilon;
  double R = 0.0;
  for (int d = 0; d < shape.n; ++d) {
    const double theta =
        2.0 * std::numbers::pi * static_cast<double>(mode[d]) /
        static_cast<double>(shape.dims[d]);
    R += (2.0 - 2.0 * std::cos(theta)) / eps2;
  }
  const double u = (2.0 - tau * tau * R) / (2.0 + tau * tau * mass * mass);
  if (u < -1.0 || u > 1.0)
    throw ConfigError(
        "dispersion: no real frequency for this mode at the given mesh "
        "(|cos(omega tau)| would exceed 1); decrease tau");
  return std::acos(u) / tau;
}

InitialData generate_initial(const InitialSpec& spec, const LatticeShape& shape,
                             int N, const PolynomialPotential& pot, double tau,
                             std::uint64_t seed) {
  if (N < 1) throw ConfigError("initial: N must be >= 1");
  const long sites = shape.sites();
  InitialData out;
  out.psi0 = FieldSlice::zeros(shape, N);
  out.psi1 = FieldSlice::zeros(shape, N);

  switch (spec.kind) {
    case InitialSpec::Kind::zero:
      break;

    case InitialSpec::Kind::gaussian_pulse: {
      std::vector<double> center = spec.center;
      if (center.empty()) {
        center.resize(shape.n);
        for (int d = 0; d < shape.n; ++d)
          center[d] = shape.epsilon * static_cast<double>(shape.dims[d] / 2);
      }
      if (center.size() != static_cast<std::size_t>(shape.n))
        throw ConfigError("initial.center must have one entry per axis");
      if (!(spec.width > 0.0)) throw ConfigError("initial.width must be > 0");
      for (long X = 0; X < sites; ++X) {
        const auto coords = site_coords(shape, X);
        double r2 = 0.0;
        for (int d = 0; d < shape.n; ++d) {
          const double dx = shape.epsilon * static_cast<double>(coords[d]) -
                            center[d];
          r2 += dx * dx;
        }
        const double v =
            spec.amplitude * std::exp(-r2 / (2.0 * spec.width * spec.width));
        out.psi0.values[X * N] = v;
        out.psi1.values[X * N] = v;  // time-symmetric start
      }
      break;
    }

    case InitialSpec::Kind::plane_wave: {
      const double omega = dispersion_omega(shape, spec.mode, pot.mass(), tau);
      for (long X = 0; X < sites; ++X) {
        const auto coords = site_coords(shape, X);
        double theta = 0.0;
        for (int d = 0; d < shape.n; ++d)
          theta += 2.0 * std::numbers::pi * static_cast<double>(spec.mode[d]) *
                   static_cast<double>(coords[d]) /
                   static_cast<double>(shape.dims[d]);
        out.psi0.values[X * N] = std::polar(spec.amplitude, theta);
        out.psi1.values[X * N] = std::polar(spec.amplitude, theta - omega * tau);
      }
      break;
    }

    case InitialSpec::Kind::random: {
      if (!(spec.l2_norm > 0.0))
        throw ConfigError("initial.l2_norm must be > 0");
      SplitMix64 rng(seed);
      for (FieldSlice* slice : {&out.psi0, &out.psi1}) {
        for (auto& v : slice->values) v = {rng.normal(), rng.normal()};
        const double norm = std::sqrt(l2_norm_sq(*slice, shape));
        const double scale = spec.l2_norm / norm;
        for (auto& v : slice->values) v *= scale;
      }
      break;
    }

    case InitialSpec::Kind::file:
      return from_snapshot(spec, shape, N, tau);
  }
  return out;
}

}  // namespace svwave
