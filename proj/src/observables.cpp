#include "svwave/observables.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "svwave/numeric.hpp"

namespace svwave {

double energy(const SimState& state, const PolynomialPotential& pot) {
  const LatticeShape& shape = state.shape;
  if (!state.prev.conforms(shape) || !state.curr.conforms(shape) ||
      state.prev.N != state.curr.N) {
    throw ConfigError("energy: state slices do not conform to the lattice shape");
  }
  pot.require_site_count(shape.sites());
  const long sites = shape.sites();
  const int N = state.curr.N;
  const double eps2 = shape.epsilon * shape.epsilon;
  const double dt_coeff =
      (1.0 / (state.tau * state.tau) - static_cast<double>(shape.n) / eps2) * 0.5;
  const double cross_coeff = 1.0 / (4.0 * eps2);

  std::vector<double> contrib(static_cast<std::size_t>(sites));
  for (long X = 0; X < sites; ++X) {
    double dt2 = 0.0;
    double curr_sq = 0.0;
    double prev_sq = 0.0;
    for (int c = 0; c < N; ++c) {
      dt2 += std::norm(state.curr.values[X * N + c] - state.prev.values[X * N + c]);
      curr_sq += std::norm(state.curr.values[X * N + c]);
      prev_sq += std::norm(state.prev.values[X * N + c]);
    }
    double cross = 0.0;
    for (int j = 0; j < shape.n; ++j) {
      for (int dir : {+1, -1}) {
        const long nbr = neighbor(shape, X, j, dir);
        for (int c = 0; c < N; ++c) {
          const std::complex<double> other =
              nbr >= 0 ? state.prev.values[nbr * N + c] : std::complex<double>(0.0);
          cross += std::norm(state.curr.values[X * N + c] - other);
        }
      }
    }
    contrib[static_cast<std::size_t>(X)] =
        dt_coeff * dt2 + cross_coeff * cross +
        0.5 * (pot.V(X, curr_sq) + pot.V(X, prev_sq));
  }
  return pairwise_sum(contrib) * shape.cell_measure();
}

bool is_real_1d(const SimState& state) {
  if (state.shape.n != 1) return false;
  double scale = 0.0;
  double max_imag = 0.0;
  for (const auto* slice : {&state.prev, &state.curr}) {
    for (const auto& v : slice->values) {
      scale = std::max(scale, std::abs(v));
      max_imag = std::max(max_imag, std::abs(v.imag()));
    }
  }
  return max_imag <= 1e-15 * scale;
}

double energy_sv(const SimState& state, const PolynomialPotential& pot) {
  const LatticeShape& shape = state.shape;
  if (shape.n != 1) {
    throw ConfigError("energy_sv: defined for 1-D lattices only");
  }
  if (!state.prev.conforms(shape) || !state.curr.conforms(shape) ||
      state.prev.N != state.curr.N) {
    throw ConfigError("energy_sv: state slices do not conform to the lattice shape");
  }
  if (!is_real_1d(state)) {
    throw ConfigError("energy_sv: field has imaginary parts beyond 1e-15 of its "
                      "magnitude; defined for real-valued fields only");
  }
  pot.require_site_count(shape.sites());
  const long sites = shape.sites();
  const int N = state.curr.N;
  const double inv_tau2 = 1.0 / (state.tau * state.tau);
  const double inv_eps2 = 1.0 / (shape.epsilon * shape.epsilon);

  std::vector<double> contrib(static_cast<std::size_t>(sites));
  for (long X = 0; X < sites; ++X) {
    const long up = neighbor(shape, X, 0, +1);
    double dt2 = 0.0;
    double grad = 0.0;
    double curr_sq = 0.0;
    double prev_sq = 0.0;
    for (int c = 0; c < N; ++c) {
      const double cu = state.curr.values[X * N + c].real();
      const double pr = state.prev.values[X * N + c].real();
      dt2 += (cu - pr) * (cu - pr);
      curr_sq += cu * cu;
      prev_sq += pr * pr;
      const double cu_up = up >= 0 ? state.curr.values[up * N + c].real() : 0.0;
      const double pr_up = up >= 0 ? state.prev.values[up * N + c].real() : 0.0;
      grad += (cu_up - cu) * (pr_up - pr);
    }
    contrib[static_cast<std::size_t>(X)] =
        dt2 * inv_tau2 + grad * inv_eps2 + pot.V(X, curr_sq) + pot.V(X, prev_sq);
  }
  return 0.5 * pairwise_sum(contrib) * shape.epsilon;
}

std::pair<double, double> charge(const SimState& state) {
  const LatticeShape& shape = state.shape;
  if (!state.prev.conforms(shape) || !state.curr.conforms(shape) ||
      state.prev.N != state.curr.N) {
    throw ConfigError("charge: state slices do not conform to the lattice shape");
  }
  const long sites = shape.sites();
  const int N = state.curr.N;

  // the bracket <psi^t_nbr, psi^{t+1}_X> - conj equals 2i Im<...>, so the
  // (i/4tau) prefactor turns each term into -Im<...>/(2 tau): accumulate
  // imaginary parts only and the result is real by construction
  std::vector<double> contrib(static_cast<std::size_t>(sites));
  for (long X = 0; X < sites; ++X) {
    double im = 0.0;
    for (int j = 0; j < shape.n; ++j) {
      for (int dir : {+1, -1}) {
        const long nbr = neighbor(shape, X, j, dir);
        if (nbr < 0) continue;
        for (int c = 0; c < N; ++c) {
          const std::complex<double> z =
              std::conj(state.prev.values[nbr * N + c]) *
              state.curr.values[X * N + c];
          im += z.imag();
        }
      }
    }
    contrib[static_cast<std::size_t>(X)] = im;
  }
  // + 0.0 turns the -0.0 of an exactly chargeless field into +0.0
  const double q_raw =
      -shape.cell_measure() / (2.0 * state.tau) * pairwise_sum(contrib) + 0.0;
  return {q_raw, q_raw / static_cast<double>(shape.n)};
}

bool apriori_check(const ObservableRecord& record, double E0, double m) {
  if (!(m > 0.0)) {
    throw ConfigError("apriori_check: requires a positive mass");
  }
  const double bound = 4.0 * E0 / (m * m);
  return record.l2_sq <= bound * (1.0 + 1e-9);
}

}  // namespace svwave
