#ifndef SVWAVE_POTENTIAL_HPP
#define SVWAVE_POTENTIAL_HPP

#include <optional>
#include <span>
#include <vector>

namespace svwave {

/**
 * Polynomial potential of the field intensity,
 *
 *   V(lambda) = (m^2/2) lambda + sum_{q=0}^{p} C_q lambda^{q+1},
 *
 * optionally with per-site coefficient rows C_{X,q} on a finite lattice.
 * The mass term is stored separately from the C_q so that the a priori
 * (mass-driven) bound and the w4 classification can see it.
 *
 * The divided difference
 *
 *   B(lambda, mu) = (V(lambda) - V(mu)) / (lambda - mu),   B(l, l) = V'(l)
 *
 * is always evaluated through the polynomial expansion
 *
 *   B = m^2/2 + sum_q C_q b_q,   b_q(lambda, mu) = sum_{k=0}^{q} lambda^{q-k} mu^k,
 *
 * never as a quotient: the quotient cancels catastrophically near
 * lambda = mu, which is the generic case for smoothly evolving fields.
 */
class PolynomialPotential {
 public:
  /// Homogeneous potential. `mass` is m (not m^2/2); coeffs are C_0..C_p.
  PolynomialPotential(double mass, std::vector<double> coeffs);

  /// Site-dependent potential: one coefficient row per lattice site, all
  /// rows the same length, sites in row-major order.
  PolynomialPotential(double mass, std::vector<std::vector<double>> site_coeffs);

  double mass() const { return mass_; }
  double mass_sq_half() const { return mass_sq_half_; }
  bool site_dependent() const { return n_sites_ > 1 || !site_rows_.empty(); }
  /// number of coefficient rows (1 when homogeneous)
  long rows() const { return site_rows_.empty() ? 1 : n_sites_; }
  int degree() const { return static_cast<int>(n_coeff_) - 1; }

  std::span<const double> coeffs(long site) const;

  /// V_X(lambda); lambda must be >= 0 up to a -1e-15 rounding allowance.
  double V(long site, double lambda) const;

  /// d/dlambda V_X(lambda)
  double dV(long site, double lambda) const;

  /// Divided difference B_X(lambda, mu), symmetric bitwise in (lambda, mu).
  double B(long site, double lambda, double mu) const;

  /// d/dlambda B_X(lambda, mu)
  double dB(long site, double lambda, double mu) const;

  /// Throws unless the rows cover exactly `sites` lattice sites.
  void require_site_count(long sites) const;

 private:
  double mass_ = 0.0;
  double mass_sq_half_ = 0.0;
  std::size_t n_coeff_ = 0;
  long n_sites_ = 1;
  std::vector<double> homogeneous_;      // coefficient row when homogeneous
  std::vector<double> site_rows_;        // flat n_sites x n_coeff otherwise
};

/// b_q(lambda, mu) = sum_{k=0}^{q} lambda^{q-k} mu^k  (monomial divided difference)
double bq(int q, double lambda, double mu);

/// d/dlambda b_q(lambda, mu)
double dbq(int q, double lambda, double mu);

}  // namespace svwave

#endif
