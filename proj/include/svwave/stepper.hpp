#ifndef SVWAVE_STEPPER_HPP
#define SVWAVE_STEPPER_HPP

#include <complex>
#include <span>
#include <stdexcept>
#include <string>

#include "svwave/lattice.hpp"
#include "svwave/potential.hpp"

namespace svwave {

/// Root-finding strategy for the per-site scalar equation. The safeguarded
/// Newton is the default; pure bisection exists as an independent route for
/// cross-validation.
enum class RootMethod { newton, bisection };

struct SolverParams {
  double tol_f = 1e-14;        // absolute tolerance on |f(s) - 1|
  long max_iter = 200;         // cap on f evaluations per site
  double bracket_growth = 2.0; // upper-bracket doubling factor
  // Refuse to run unless the uniqueness criterion or tau < tau2 holds
  // (enforced by the harness admissibility check, not per site).
  bool strict_uniqueness = false;
  RootMethod method = RootMethod::newton;

  void validate() const;  // tol_f > 0, max_iter >= 8, bracket_growth > 1
};

struct SiteSolveResult {
  double s = 0.0;        // accepted root of f(s) = 1 (0 for the xi = 0 branch)
  long iterations = 0;   // f evaluations spent
  double residual = 0.0; // |f(s) - 1| at acceptance
};

/// A site's implicit solve did not converge.
class StepFailure : public std::runtime_error {
 public:
  StepFailure(long site, double residual, long iterations);
  long site() const { return site_; }
  double residual() const { return residual_; }
  long iterations() const { return iterations_; }

 private:
  long site_;
  double residual_;
  long iterations_;
};

struct StepStats {
  long max_iterations = 0;   // worst site in the step
  double max_residual = 0.0; // worst accepted residual
};

struct StepResult {
  SimState state;
  StepStats stats;
};

/// xi = tau^2 * laplacian(curr) + 2 * curr, the explicit side of the
/// per-site equation (1 + tau^2 B)(psi_next + psi_prev) = xi.
FieldSlice compute_xi(const SimState& state);

/// f(s) = (1 + tau^2 B(|s xi - psi_prev|^2, |psi_prev|^2)) s. The root of
/// f(s) = 1 fixes psi_next + psi_prev = s xi.
double eval_f(double s, std::span<const std::complex<double>> xi,
              std::span<const std::complex<double>> psi_prev, double tau,
              long site, const PolynomialPotential& pot);

/// d/ds of eval_f:
/// 1 + tau^2 B + tau^2 dB * (-2 Re<psi_prev, xi> + 2 |xi|^2 s) s,
/// with B, dB evaluated at (|s xi - psi_prev|^2, |psi_prev|^2).
double eval_fprime(double s, std::span<const std::complex<double>> xi,
                   std::span<const std::complex<double>> psi_prev, double tau,
                   long site, const PolynomialPotential& pot);

/// Solves one site: writes psi_next = s* xi - psi_prev into psi_next_out.
/// If xi is exactly zero in every component, psi_next = -psi_prev with no
/// solve. Otherwise brackets [0, 1/c] (doubling the top until f >= 1, which
/// f(s) >= c s guarantees) and runs safeguarded Newton with bisection
/// fallback whenever an iterate leaves the bracket or f' <= 0. `c` is the
/// positive lower bound of 1 + tau^2 B established before stepping.
/// Throws StepFailure when max_iter is exhausted.
SiteSolveResult solve_site(std::span<const std::complex<double>> xi,
                           std::span<const std::complex<double>> psi_prev,
                           double tau, long site, const PolynomialPotential& pot,
                           const SolverParams& params, double c,
                           std::span<std::complex<double>> psi_next_out);

/// One forward time step: prev <- curr, curr <- per-site solutions,
/// step_index + 1. Site solves are independent; with any worker count the
/// result is bitwise identical (disjoint writes, no reductions). On failure
/// the lowest failing site index is reported deterministically.
StepResult step(const SimState& state, const PolynomialPotential& pot,
                const SolverParams& params, double c, int workers = 1);

/// One backward time step (the scheme is symmetric under
/// psi_next <-> psi_prev): implemented as step on the slice-swapped state,
/// step_index - 1.
StepResult step_backward(const SimState& state, const PolynomialPotential& pot,
                         const SolverParams& params, double c, int workers = 1);

/// Per-step l2 growth bound:
/// ||psi_next|| <= (1/c)(4 tau^2 n / eps^2 + 2) ||psi_curr|| + ||psi_prev||.
/// Checked via assert after each step in debug builds; exposed for tests.
bool l2_recursion_holds(const SimState& before, const SimState& after, double c);

}  // namespace svwave

#endif
