#ifndef SVWAVE_INITIAL_HPP
#define SVWAVE_INITIAL_HPP

#include <cstdint>
#include <vector>

#include "svwave/config.hpp"
#include "svwave/lattice.hpp"
#include "svwave/potential.hpp"

namespace svwave {

/// Cauchy data: the two slices that seed the two-step recursion, plus the
/// step index they correspond to (1 for fresh data; a snapshot's own index
/// when resuming from file).
struct InitialData {
  FieldSlice psi0;  // psi^{t0-1}, installed as the state's prev slice
  FieldSlice psi1;  // psi^{t0},   installed as the state's curr slice
  long step_index = 1;
};

/// Frequency of the discrete plane wave with integer mode vector k:
/// solves (2 - 2 cos(omega tau)) / tau^2 = R + m^2 cos(omega tau) with
/// R = sum_j (2 - 2 cos(2 pi k_j / L_j)) / eps^2, i.e.
/// cos(omega tau) = (2 - tau^2 R) / (2 + tau^2 m^2), principal branch.
/// Throws ConfigError when the right side leaves [-1, 1] (the mode does not
/// propagate at this tau; decrease tau).
double dispersion_omega(const LatticeShape& shape, const std::vector<long>& mode,
                        double mass, double tau);

/// Builds the initial slices for a run. The plane-wave kind lies on an exact
/// trajectory of the scheme when the potential beyond the mass term vanishes;
/// the file kind loads a snapshot sidecar and requires its shape, component
/// count, and tau to match the run's exactly.
InitialData generate_initial(const InitialSpec& spec, const LatticeShape& shape,
                             int N, const PolynomialPotential& pot, double tau,
                             std::uint64_t seed);

}  // namespace svwave

#endif
