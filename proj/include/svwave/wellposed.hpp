#ifndef SVWAVE_WELLPOSED_HPP
#define SVWAVE_WELLPOSED_HPP

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "svwave/potential.hpp"

namespace svwave {

/// Result of the monomial arc scan backing the k2 sign analysis.
struct MonomialArcReport {
  int p = 0;              // monomial V = lambda^{p+1}
  long samples = 0;
  double arc_min = 0.0;     // min of K± on the quarter unit circle
  double reduced_min = 0.0; // min of the reduced single-variable polynomial on [0,1)
  bool pass = false;        // both strictly positive
};

/// Result of the uniqueness-criterion verification at a given tau.
struct UniquenessReport {
  bool pass = false;
  double tau = 0.0;
  double one_plus_tau2_k3 = 0.0;    // must be > 0
  double min_dB = 0.0;              // grid min of d/dlambda B, must be >= 0
  double min_slack = 0.0;           // grid min of B - (mu/2) dB
  double one_plus_tau2_slack = 0.0; // must be > 0
  std::array<double, 4> bq_slack_min{}; // q = 1..4, each must be >= 0
  std::string failure;              // names the first failed inequality; empty on pass
};

/// Well-posedness constants and admissible mesh thresholds for a potential.
/// tau_i are open-interval thresholds: a mesh step is admissible iff tau < tau_i
/// strictly.
struct StabilityReport {
  double k1 = 0.0;       // exact inf over sites, lambda>=0 of dV (may be -inf)
  double tau1 = 0.0;     // sqrt(-1/k1) when k1 < 0, else +inf
  double k2_est = 0.0;   // grid estimate of inf K± (never above k1)
  double tau2_est = 0.0;
  bool w4 = false;       // degree <= 4 with nonnegative higher coefficients
  double k3 = 0.0;       // inf over sites of C_{X,0}; NaN unless w4
  double tau3 = 0.0;     // NaN unless w4
  double tau = 0.0;      // the tau the report was evaluated at; NaN if none given
  double c = 0.0;        // 1 + tau^2 k1; NaN if no tau given
  double scan_domain = 0.0;
  long grid = 0;
  std::optional<UniquenessReport> uniqueness;  // present when w4 and tau given
};

/// Exact infimum of dV_X(lambda) over lambda >= 0 and all sites. Returns
/// -infinity when the leading behavior is downward (non-confining potential).
double compute_k1(const PolynomialPotential& pot);

/// Grid estimate of inf K±_X(lambda,mu) with
/// K± = B + 2 dB (lambda ± sqrt(lambda mu)), over [0,scan_domain]^2 with
/// `grid` points per axis (>= 100), both signs, all sites. The exact diagonal
/// infimum k1 is folded in (K^- restricted to lambda = mu equals dV), so the
/// estimate never exceeds k1.
double estimate_k2(const PolynomialPotential& pot, double scan_domain, long grid);

/// True when every coefficient row has effective degree <= 4 (trailing zeros
/// ignored) and C_q >= 0 for q = 1..4. On failure, *why (if given) names the
/// offending site and degree.
bool is_w4(const PolynomialPotential& pot, std::string* why = nullptr);

/// k3 = inf over sites of C_{X,0} and tau3 = sqrt(-1/k3) (or +infinity when
/// k3 >= 0). Throws ConfigError when the potential is outside the w4 class.
std::pair<double, double> compute_k3_tau3(const PolynomialPotential& pot);

/// c = 1 + tau^2 k1, the exact lower bound of 1 + tau^2 B over nonnegative
/// intensities. Cross-checked against a coarse grid scan of 1 + tau^2 B.
/// A non-positive return is a refusal flag for stepping, not an error.
double lower_bound_c(const PolynomialPotential& pot, double tau,
                     double scan_domain);

/// For V = lambda^{p+1}, scans K± on the quarter unit circle
/// lambda^2 + mu^2 = 1 (homogeneity reduces the quarter-plane to the arc) and
/// independently the reduced polynomial inequality on z in [0,1).
MonomialArcReport scan_monomial_arc(int p, long samples);

/// Reduced single-variable form of the monomial arc inequality:
/// (1-z)(1-z^{2p+2}) + 2z(p+1)(z^{2p} - z^{2p+2}), positive on [0,1).
double monomial_arc_reduced(int p, double z);

/// b_q - (mu/2) d/dlambda b_q, evaluated in a cancellation-free rearrangement
/// for q = 1..4 (where the inequality slack can vanish identically) and
/// naively otherwise.
double bq_slack(int q, double lambda, double mu);

/// Grid minimum over [0,scan_domain]^2 of b_q - (mu/2) d/dlambda b_q,
/// which is nonnegative for q = 1..4.
double min_bq_slack(int q, double scan_domain, long grid);

/// Verifies the uniqueness criterion at tau: (i) 1 + tau^2 k3 > 0,
/// (ii) dB >= 0 on the scan grid, (iii) 1 + tau^2 inf(B - (mu/2) dB) > 0 on
/// the scan grid, plus the q = 1..4 slack scans. Requires a w4 potential.
UniquenessReport check_uniqueness_criterion(const PolynomialPotential& pot,
                                            double tau, double scan_domain);

/// sqrt(-1/k) when k < 0 (0 when k = -infinity), +infinity otherwise.
double tau_from_k(double k);

/// Assembles the full report; uniqueness section included when the potential
/// is w4 and a tau is supplied.
StabilityReport stability_report(const PolynomialPotential& pot,
                                 std::optional<double> tau, double scan_domain,
                                 long grid);

/// JSON rendering with non-finite values serialized as "inf"/"-inf"/"nan".
std::string stability_report_json(const StabilityReport& report);

}  // namespace svwave

#endif
