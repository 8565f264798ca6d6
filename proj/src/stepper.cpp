#include "svwave/stepper.hpp"

#include <atomic>
#include <cassert>
#include <cmath>
#include <limits>

#include "svwave/numeric.hpp"

namespace svwave {

void SolverParams::validate() const {
  if (!(tol_f > 0.0)) throw ConfigError("solver: tol_f must be positive");
  if (max_iter < 8) throw ConfigError("solver: max_iter must be >= 8");
  if (!(bracket_growth > 1.0)) {
    throw ConfigError("solver: bracket_growth must exceed 1");
  }
}

StepFailure::StepFailure(long site, double residual, long iterations)
    : std::runtime_error("site " + std::to_string(site) +
                         ": implicit solve did not converge (residual " +
                         format17(residual) + " after " +
                         std::to_string(iterations) + " iterations)"),
      site_(site),
      residual_(residual),
      iterations_(iterations) {}

namespace {

// Shared description of one site's scalar problem. eval_f, eval_fprime, and
// the solver all evaluate through this struct so their arithmetic is
// bitwise identical.
struct SiteProblem {
  std::span<const std::complex<double>> xi;
  std::span<const std::complex<double>> prev;
  double tau2;
  long site;
  const PolynomialPotential* pot;
  double mu;     // |psi_prev|^2
  double xi2;    // |xi|^2
  double cross;  // Re<psi_prev, xi>

  SiteProblem(std::span<const std::complex<double>> xi_,
              std::span<const std::complex<double>> prev_, double tau,
              long site_, const PolynomialPotential& pot_)
      : xi(xi_), prev(prev_), tau2(tau * tau), site(site_), pot(&pot_) {
    double m = 0.0, x2 = 0.0, cr = 0.0;
    for (std::size_t c = 0; c < xi.size(); ++c) {
      m += std::norm(prev[c]);
      x2 += std::norm(xi[c]);
      cr += prev[c].real() * xi[c].real() + prev[c].imag() * xi[c].imag();
    }
    mu = m;
    xi2 = x2;
    cross = cr;
  }

  // |s xi - psi_prev|^2, accumulated componentwise (not via the expanded
  // quadratic) so it is nonnegative by construction.
  double lambda(double s) const {
    double acc = 0.0;
    for (std::size_t c = 0; c < xi.size(); ++c) {
      acc += std::norm(s * xi[c] - prev[c]);
    }
    return acc;
  }

  double f(double s) const {
    return (1.0 + tau2 * pot->B(site, lambda(s), mu)) * s;
  }

  double fprime(double s) const {
    const double lam = lambda(s);
    return 1.0 + tau2 * pot->B(site, lam, mu) +
           tau2 * pot->dB(site, lam, mu) * (-2.0 * cross + 2.0 * xi2 * s) * s;
  }
};

}  // namespace

double eval_f(double s, std::span<const std::complex<double>> xi,
              std::span<const std::complex<double>> psi_prev, double tau,
              long site, const PolynomialPotential& pot) {
  return SiteProblem(xi, psi_prev, tau, site, pot).f(s);
}

double eval_fprime(double s, std::span<const std::complex<double>> xi,
                   std::span<const std::complex<double>> psi_prev, double tau,
                   long site, const PolynomialPotential& pot) {
  return SiteProblem(xi, psi_prev, tau, site, pot).fprime(s);
}

SiteSolveResult solve_site(std::span<const std::complex<double>> xi,
                           std::span<const std::complex<double>> psi_prev,
                           double tau, long site, const PolynomialPotential& pot,
                           const SolverParams& params, double c,
                           std::span<std::complex<double>> psi_next_out) {
  params.validate();
  if (!(c > 0.0)) {
    throw ConfigError("solve_site: lower bound c must be positive (got " +
                      format17(c) + "); mesh step is outside the admissible range");
  }

  bool xi_zero = true;
  for (const auto& v : xi) {
    if (v.real() != 0.0 || v.imag() != 0.0) {
      xi_zero = false;
      break;
    }
  }
  if (xi_zero) {
    // (1 + tau^2 B)(psi_next + psi_prev) = 0 with 1 + tau^2 B >= c > 0
    for (std::size_t k = 0; k < psi_prev.size(); ++k) {
      psi_next_out[k] = -psi_prev[k];
    }
    return {0.0, 0, 0.0};
  }

  const SiteProblem P(xi, psi_prev, tau, site, pot);
  long evals = 0;

  // Bracket [0, hi]: f(0) = 0 < 1, and f(s) >= c s makes f(1/c) >= 1 up to
  // rounding; grow the top if rounding undershoots.
  const double lo0 = 0.0;
  double lo = lo0;
  double hi = 1.0 / c;
  double f_hi = P.f(hi);
  ++evals;
  while (f_hi < 1.0 && evals < params.max_iter) {
    hi *= params.bracket_growth;
    f_hi = P.f(hi);
    ++evals;
  }
  if (f_hi < 1.0) {
    throw StepFailure(site, 1.0 - f_hi, evals);
  }

  // Initial guess: the root of the linearization with B frozen at the
  // diagonal (exact for intensity-independent B).
  double s = 1.0 / (1.0 + P.tau2 * pot.B(site, P.mu, P.mu));
  if (!(s > lo) || !(s < hi)) s = 0.5 * (lo + hi);

  double residual = std::numeric_limits<double>::infinity();
  while (evals < params.max_iter) {
    const double fs = P.f(s);
    ++evals;
    residual = std::abs(fs - 1.0);
    if (residual <= params.tol_f) {
      for (std::size_t k = 0; k < psi_prev.size(); ++k) {
        psi_next_out[k] = s * xi[k] - psi_prev[k];
      }
      return {s, evals, residual};
    }
    if (fs < 1.0) {
      lo = s;
    } else {
      hi = s;
    }
    double next = 0.0;
    bool have_next = false;
    if (params.method == RootMethod::newton) {
      const double fp = P.fprime(s);
      if (fp > 0.0) {
        const double candidate = s - (fs - 1.0) / fp;
        if (candidate > lo && candidate < hi) {
          next = candidate;
          have_next = true;
        }
      }
    }
    if (!have_next) next = 0.5 * (lo + hi);
    if (next == s || next <= lo0 || !(next == next)) {
      // bracket exhausted at floating-point resolution
      break;
    }
    s = next;
  }
  throw StepFailure(site, residual, evals);
}

namespace {

StepResult step_forward_impl(const SimState& state, const PolynomialPotential& pot,
                             const SolverParams& params, double c, int workers) {
  params.validate();
  if (!state.curr.conforms(state.shape) || !state.prev.conforms(state.shape) ||
      state.curr.N != state.prev.N) {
    throw ConfigError("step: state slices do not conform to the lattice shape");
  }
  pot.require_site_count(state.shape.sites());
  if (!(c > 0.0)) {
    throw ConfigError("step: lower bound c must be positive (got " + format17(c) +
                      "); mesh step is outside the admissible range");
  }

  const long sites = state.shape.sites();
  const int N = state.curr.N;
  const FieldSlice xi = compute_xi(state);

  FieldSlice next = FieldSlice::zeros(state.shape, N);

  constexpr long kNoFailure = std::numeric_limits<long>::max();
  std::atomic<long> first_failure{kNoFailure};
  const int chunks = std::max(1, workers);
  std::vector<long> chunk_max_iters(static_cast<std::size_t>(chunks) * 16, 0);
  std::vector<double> chunk_max_res(static_cast<std::size_t>(chunks) * 16, 0.0);
  std::atomic<int> chunk_counter{0};

  parallel_for(sites, workers, [&](long begin, long end) {
    const int chunk = chunk_counter.fetch_add(1);
    long max_it = 0;
    double max_res = 0.0;
    for (long X = begin; X < end; ++X) {
      try {
        // the pair equation couples psi_next with psi_prev; xi carries curr
        auto res = solve_site(
            std::span<const std::complex<double>>(xi.values.data() + X * N,
                                                  static_cast<std::size_t>(N)),
            std::span<const std::complex<double>>(state.prev.values.data() + X * N,
                                                  static_cast<std::size_t>(N)),
            state.tau, X, pot, params, c,
            std::span<std::complex<double>>(next.values.data() + X * N,
                                            static_cast<std::size_t>(N)));
        max_it = std::max(max_it, res.iterations);
        max_res = std::max(max_res, res.residual);
      } catch (...) {
        // record the site; the lowest one is re-solved serially afterwards so
        // the reported failure is deterministic across worker counts
        long seen = first_failure.load();
        while (X < seen && !first_failure.compare_exchange_weak(seen, X)) {
        }
      }
    }
    chunk_max_iters[static_cast<std::size_t>(chunk) * 16] = max_it;
    chunk_max_res[static_cast<std::size_t>(chunk) * 16] = max_res;
  });

  const long failed = first_failure.load();
  if (failed != kNoFailure) {
    std::vector<std::complex<double>> scratch(static_cast<std::size_t>(N));
    solve_site(std::span<const std::complex<double>>(
                   xi.values.data() + failed * N, static_cast<std::size_t>(N)),
               std::span<const std::complex<double>>(
                   state.prev.values.data() + failed * N,
                   static_cast<std::size_t>(N)),
               state.tau, failed, pot, params, c,
               std::span<std::complex<double>>(scratch.data(), scratch.size()));
    // the serial re-solve must fail the same way; if it somehow converged,
    // still refuse the step rather than mix outcomes
    throw StepFailure(failed, std::numeric_limits<double>::quiet_NaN(), 0);
  }

  StepStats stats;
  for (int k = 0; k < chunk_counter.load(); ++k) {
    stats.max_iterations =
        std::max(stats.max_iterations, chunk_max_iters[static_cast<std::size_t>(k) * 16]);
    stats.max_residual =
        std::max(stats.max_residual, chunk_max_res[static_cast<std::size_t>(k) * 16]);
  }

  StepResult out;
  out.state.prev = state.curr;
  out.state.curr = std::move(next);
  out.state.step_index = state.step_index + 1;
  out.state.tau = state.tau;
  out.state.shape = state.shape;
  out.stats = stats;
  assert(l2_recursion_holds(state, out.state, c));
  return out;
}

}  // namespace

FieldSlice compute_xi(const SimState& state) {
  FieldSlice xi = laplacian(state.curr, state.shape);
  const double tau2 = state.tau * state.tau;
  for (std::size_t i = 0; i < xi.values.size(); ++i) {
    xi.values[i] = tau2 * xi.values[i] + 2.0 * state.curr.values[i];
  }
  return xi;
}

StepResult step(const SimState& state, const PolynomialPotential& pot,
                const SolverParams& params, double c, int workers) {
  return step_forward_impl(state, pot, params, c, workers);
}

StepResult step_backward(const SimState& state, const PolynomialPotential& pot,
                         const SolverParams& params, double c, int workers) {
  SimState swapped;
  swapped.prev = state.curr;
  swapped.curr = state.prev;
  swapped.step_index = state.step_index;
  swapped.tau = state.tau;
  swapped.shape = state.shape;
  StepResult fwd = step_forward_impl(swapped, pot, params, c, workers);
  // fwd.curr holds the slice one step before state.prev in physical time
  StepResult out;
  out.state.prev = std::move(fwd.state.curr);
  out.state.curr = state.prev;
  out.state.step_index = state.step_index - 1;
  out.state.tau = state.tau;
  out.state.shape = state.shape;
  out.stats = fwd.stats;
  return out;
}

bool l2_recursion_holds(const SimState& before, const SimState& after, double c) {
  const double norm_next = std::sqrt(l2_norm_sq(after.curr, after.shape));
  const double norm_curr = std::sqrt(l2_norm_sq(before.curr, before.shape));
  const double norm_prev = std::sqrt(l2_norm_sq(before.prev, before.shape));
  const double eps2 = before.shape.epsilon * before.shape.epsilon;
  const double tau2 = before.tau * before.tau;
  const double bound =
      (1.0 / c) * (4.0 * tau2 * static_cast<double>(before.shape.n) / eps2 + 2.0) *
          norm_curr +
      norm_prev;
  return norm_next <= bound * (1.0 + 1e-9) + 1e-300;
}

}  // namespace svwave
