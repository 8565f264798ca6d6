#ifndef SVWAVE_OBSERVABLES_HPP
#define SVWAVE_OBSERVABLES_HPP

#include <optional>
#include <utility>

#include "svwave/lattice.hpp"
#include "svwave/potential.hpp"

namespace svwave {

/// Observables attached to one consecutive slice pair: the state's prev slice
/// is psi^t, curr is psi^{t+1}, and the record is labeled by t.
struct ObservableRecord {
  long t = 0;
  double energy = 0.0;
  std::optional<double> energy_sv;  // only for real 1-D fields
  double charge_raw = 0.0;
  double charge_phys = 0.0;         // charge_raw / n
  double l2_sq = 0.0;               // ||psi^t||^2 eps^n (prev slice)
  std::optional<double> apriori_margin;  // 4 E0/m^2 - l2_sq, when m > 0
};

/// Discrete energy of the pair (prev, curr) = (psi^t, psi^{t+1}):
/// eps^n sum_X [ (1/tau^2 - n/eps^2) |curr - prev|^2 / 2
///             + sum_j sum_± |curr_X - prev_{X±e_j}|^2 / (4 eps^2)
///             + (V(|curr|^2) + V(|prev|^2)) / 2 ],
/// with a deterministic pairwise reduction. Conserved along trajectories;
/// nonnegative when tau/eps <= 1/sqrt(n) and the potential is nonnegative.
double energy(const SimState& state, const PolynomialPotential& pot);

/// The original Strauss-Vazquez 1-D energy,
/// (eps/2) sum_X [ (curr-prev)^2/tau^2
///               + (curr_{X+1}-curr_X)(prev_{X+1}-prev_X)/eps^2
///               + V(|curr|^2) + V(|prev|^2) ],
/// defined for real-valued 1-D fields only (throws ConfigError otherwise).
/// The eps factor is ours: the historical formula carries no measure weight,
/// and the scaling aligns it with energy(); on a periodic lattice the two
/// agree exactly by summation by parts.
double energy_sv(const SimState& state, const PolynomialPotential& pot);

/// Discrete charge of the pair:
/// q_raw = (i/(4 tau)) eps^n sum_X sum_j sum_± [ <psi^t_{X±e_j}, psi^{t+1}_X>
///                                              - conj ],
/// assembled from imaginary parts so the result is real by construction.
/// Conserved when tau/eps = 1/sqrt(n). Returns (q_raw, q_phys = q_raw/n);
/// the /n restores the continuum normalization of the summed form.
std::pair<double, double> charge(const SimState& state);

/// True when the state is 1-D with imaginary parts at most 1e-15 of the
/// largest field magnitude — the domain where energy_sv is defined.
bool is_real_1d(const SimState& state);

/// A priori bound: l2_sq <= (4 E0 / m^2) (1 + 1e-9). Valid when m > 0, the
/// non-mass potential part is nonnegative, and tau/eps <= 1/sqrt(n).
bool apriori_check(const ObservableRecord& record, double E0, double m);

}  // namespace svwave

#endif
