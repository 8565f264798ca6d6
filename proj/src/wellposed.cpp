#include "svwave/wellposed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "json.hpp"
#include "svwave/numeric.hpp"

namespace svwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double poly_eval(const std::vector<double>& a, double x) {
  double acc = 0.0;
  for (std::size_t i = a.size(); i-- > 0;) acc = acc * x + a[i];
  return acc;
}

std::vector<double> poly_derivative(const std::vector<double>& a) {
  if (a.size() <= 1) return {0.0};
  std::vector<double> d(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) {
    d[i - 1] = static_cast<double>(i) * a[i];
  }
  return d;
}

void trim_trailing_zeros(std::vector<double>& a) {
  while (a.size() > 1 && a.back() == 0.0) a.pop_back();
}

// Coefficients of dV for one site row: dV = m^2/2 + sum_q (q+1) C_q lambda^q.
std::vector<double> dv_coeffs(double mass_sq_half, std::span<const double> C) {
  std::vector<double> a(C.size());
  for (std::size_t q = 0; q < C.size(); ++q) {
    a[q] = static_cast<double>(q + 1) * C[q];
  }
  a[0] += mass_sq_half;
  return a;
}

// Exact minimum of a polynomial over [0, +infinity). Returns -infinity when
// the trimmed leading coefficient is negative. Strategy: every local minimum
// sits at a sign change of the derivative inside the Cauchy root bound, so
// dense-sample the derivative, bisect each sign change, and take the least
// value of the polynomial over 0, the refined critical points, and the dense
// sample grid itself.
double poly_min_halfline(std::vector<double> a) {
  trim_trailing_zeros(a);
  const std::size_t deg = a.size() - 1;
  if (deg == 0) return a[0];
  if (a.back() < 0.0) return -kInf;

  double best = a[0];  // value at lambda = 0
  std::vector<double> ap = poly_derivative(a);
  trim_trailing_zeros(ap);
  if (ap.size() == 1 && ap[0] == 0.0) return best;

  double lead = std::abs(ap.back());
  double mx = 0.0;
  for (std::size_t i = 0; i + 1 < ap.size(); ++i) mx = std::max(mx, std::abs(ap[i]));
  const double R = 1.0 + mx / lead;  // all real roots of ap lie in [-R, R]

  const long samples = std::max<long>(4096, 512 * static_cast<long>(deg));
  double prev_x = 0.0;
  double prev_v = poly_eval(ap, 0.0);
  for (long i = 1; i <= samples; ++i) {
    const double x = R * static_cast<double>(i) / static_cast<double>(samples);
    const double v = poly_eval(ap, x);
    best = std::min(best, poly_eval(a, x));
    if ((prev_v < 0.0 && v >= 0.0) || (prev_v > 0.0 && v <= 0.0)) {
      double lo = prev_x, hi = x, flo = prev_v;
      for (int iter = 0; iter < 200 && (hi - lo) > 1e-17 * R; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double fm = poly_eval(ap, mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      best = std::min(best, poly_eval(a, 0.5 * (lo + hi)));
    }
    prev_x = x;
    prev_v = v;
  }
  return best;
}

// Representative site indices, one per distinct coefficient row. Site tables
// typically repeat a handful of rows; scanning each distinct row once keeps
// grid scans exact without iterating the whole lattice.
std::vector<long> distinct_rows(const PolynomialPotential& pot) {
  std::vector<long> reps;
  std::map<std::vector<double>, bool> seen;
  for (long r = 0; r < pot.rows(); ++r) {
    auto row = pot.coeffs(r);
    std::vector<double> key(row.begin(), row.end());
    if (seen.emplace(std::move(key), true).second) reps.push_back(r);
  }
  return reps;
}

}  // namespace

double tau_from_k(double k) {
  if (k < 0.0) return std::sqrt(-1.0 / k);  // k = -inf gives 0
  return kInf;
}

double compute_k1(const PolynomialPotential& pot) {
  double k = kInf;
  for (long r : distinct_rows(pot)) {
    k = std::min(k, poly_min_halfline(dv_coeffs(pot.mass_sq_half(), pot.coeffs(r))));
  }
  return k;
}

double estimate_k2(const PolynomialPotential& pot, double scan_domain, long grid) {
  if (grid < 100) {
    throw ConfigError("estimate_k2: grid must be >= 100 points per axis, got " +
                      std::to_string(grid));
  }
  if (!(scan_domain > 0.0)) {
    throw ConfigError("estimate_k2: scan_domain must be positive");
  }
  double kmin = kInf;
  for (long r : distinct_rows(pot)) {
    for (long i = 0; i < grid; ++i) {
      const double l = scan_domain * static_cast<double>(i) / static_cast<double>(grid - 1);
      for (long j = 0; j < grid; ++j) {
        const double m = scan_domain * static_cast<double>(j) / static_cast<double>(grid - 1);
        const double B = pot.B(r, l, m);
        const double dB = pot.dB(r, l, m);
        const double s = std::sqrt(l * m);
        kmin = std::min(kmin, B + 2.0 * dB * (l + s));
        kmin = std::min(kmin, B + 2.0 * dB * (l - s));
      }
    }
  }
  // K^- on the diagonal equals dV, so inf K± <= k1 exactly; folding the exact
  // k1 in sharpens the grid estimate and preserves the ordering tau2 <= tau1.
  return std::min(kmin, compute_k1(pot));
}

bool is_w4(const PolynomialPotential& pot, std::string* why) {
  for (long r : distinct_rows(pot)) {
    auto C = pot.coeffs(r);
    for (std::size_t q = 0; q < C.size(); ++q) {
      if (q >= 5 && C[q] != 0.0) {
        if (why) {
          *why = "site " + std::to_string(r) + ": degree " + std::to_string(q) +
                 " coefficient is nonzero (class allows degree <= 4)";
        }
        return false;
      }
      if (q >= 1 && q <= 4 && C[q] < 0.0) {
        if (why) {
          *why = "site " + std::to_string(r) + ": degree " + std::to_string(q) +
                 " coefficient is negative (" + format17(C[q]) + ")";
        }
        return false;
      }
    }
  }
  return true;
}

std::pair<double, double> compute_k3_tau3(const PolynomialPotential& pot) {
  std::string why;
  if (!is_w4(pot, &why)) {
    throw ConfigError("potential outside the degree-4 nonnegative class: " + why);
  }
  double k3 = kInf;
  for (long r : distinct_rows(pot)) {
    k3 = std::min(k3, pot.coeffs(r)[0]);
  }
  return {k3, tau_from_k(k3)};
}

double lower_bound_c(const PolynomialPotential& pot, double tau,
                     double scan_domain) {
  if (!(tau > 0.0)) {
    throw ConfigError("lower_bound_c: tau must be positive");
  }
  const double k1 = compute_k1(pot);
  const double c = 1.0 + tau * tau * k1;
  if (std::isfinite(c)) {
    // Cross-check: a grid scan of 1 + tau^2 B can never fall below the exact
    // bound. A violation means B and dV have drifted apart internally.
    auto reps = distinct_rows(pot);
    if (reps.size() > 64) reps.resize(64);
    const long g = 128;
    double scan_min = kInf;
    for (long r : reps) {
      for (long i = 0; i < g; ++i) {
        const double l = scan_domain * static_cast<double>(i) / static_cast<double>(g - 1);
        for (long j = 0; j < g; ++j) {
          const double m = scan_domain * static_cast<double>(j) / static_cast<double>(g - 1);
          scan_min = std::min(scan_min, 1.0 + tau * tau * pot.B(r, l, m));
        }
      }
    }
    if (scan_min < c - 1e-9 * (1.0 + std::abs(c))) {
      throw std::logic_error(
          "lower_bound_c: grid scan of 1 + tau^2 B fell below the exact bound");
    }
  }
  return c;
}

double monomial_arc_reduced(int p, double z) {
  const double z2p = std::pow(z, 2 * p);
  const double z2p2 = z2p * z * z;  // z^{2p+2}
  return (1.0 - z) * (1.0 - z2p2) +
         2.0 * z * static_cast<double>(p + 1) * (z2p - z2p2);
}

MonomialArcReport scan_monomial_arc(int p, long samples) {
  if (p < 0) throw ConfigError("scan_monomial_arc: p must be >= 0");
  if (samples < 2) throw ConfigError("scan_monomial_arc: samples must be >= 2");
  MonomialArcReport rep;
  rep.p = p;
  rep.samples = samples;

  double arc_min = kInf;
  const double half_pi = 1.5707963267948966;
  for (long i = 0; i < samples; ++i) {
    const double theta =
        half_pi * static_cast<double>(i) / static_cast<double>(samples - 1);
    const double l = std::max(0.0, std::cos(theta));
    const double m = std::max(0.0, std::sin(theta));
    const double b = bq(p, l, m);
    const double d = dbq(p, l, m);
    const double s = std::sqrt(l * m);
    arc_min = std::min(arc_min, b + 2.0 * d * (l + s));
    arc_min = std::min(arc_min, b + 2.0 * d * (l - s));
  }
  rep.arc_min = arc_min;

  double red_min = kInf;
  for (long i = 0; i < samples; ++i) {
    const double z = static_cast<double>(i) / static_cast<double>(samples);  // [0,1)
    red_min = std::min(red_min, monomial_arc_reduced(p, z));
  }
  rep.reduced_min = red_min;
  rep.pass = arc_min > 0.0 && red_min > 0.0;
  return rep;
}

// b_q - (mu/2) d/dlambda b_q, evaluated in a cancellation-free form for
// q = 1..4. The naive difference loses to rounding exactly where the
// inequality is tight (for q = 4 it vanishes identically on lambda = mu, with
// operands ~lambda^4), so each case is rearranged until nonnegativity is
// visible term by term:
//   q=1: l + m/2
//   q=2: l^2 + m^2/2
//   q=3: l^3 - l^2 m/2 + m^3/2   (bounded below by ~0.48 max(l,m)^3)
//   q=4: (l-m)^2 ((l + m/2)^2 + m^2/4)
double bq_slack(int q, double l, double m) {
  switch (q) {
    case 1:
      return l + 0.5 * m;
    case 2:
      return l * l + 0.5 * m * m;
    case 3:
      return l * l * l - 0.5 * l * l * m + 0.5 * m * m * m;
    case 4: {
      const double d = l - m;
      const double a = l + 0.5 * m;
      return d * d * (a * a + 0.25 * m * m);
    }
    default:
      return bq(q, l, m) - 0.5 * m * dbq(q, l, m);
  }
}

double min_bq_slack(int q, double scan_domain, long grid) {
  if (q < 1) throw ConfigError("min_bq_slack: q must be >= 1");
  if (grid < 2) throw ConfigError("min_bq_slack: grid must be >= 2");
  double mn = kInf;
  for (long i = 0; i < grid; ++i) {
    const double l = scan_domain * static_cast<double>(i) / static_cast<double>(grid - 1);
    for (long j = 0; j < grid; ++j) {
      const double m = scan_domain * static_cast<double>(j) / static_cast<double>(grid - 1);
      mn = std::min(mn, bq_slack(q, l, m));
    }
  }
  return mn;
}

UniquenessReport check_uniqueness_criterion(const PolynomialPotential& pot,
                                            double tau, double scan_domain) {
  std::string why;
  if (!is_w4(pot, &why)) {
    throw ConfigError("uniqueness criterion needs a degree-4 nonnegative class potential: " +
                      why);
  }
  if (!(tau > 0.0)) {
    throw ConfigError("check_uniqueness_criterion: tau must be positive");
  }
  UniquenessReport rep;
  rep.tau = tau;
  const auto [k3, tau3] = compute_k3_tau3(pot);
  (void)tau3;
  rep.one_plus_tau2_k3 = 1.0 + tau * tau * k3;

  const long g = 200;
  double min_dB = kInf;
  double min_slack = kInf;
  for (long r : distinct_rows(pot)) {
    for (long i = 0; i < g; ++i) {
      const double l = scan_domain * static_cast<double>(i) / static_cast<double>(g - 1);
      for (long j = 0; j < g; ++j) {
        const double m = scan_domain * static_cast<double>(j) / static_cast<double>(g - 1);
        const double dB = pot.dB(r, l, m);
        min_dB = std::min(min_dB, dB);
        min_slack = std::min(min_slack, pot.B(r, l, m) - 0.5 * m * dB);
      }
    }
  }
  rep.min_dB = min_dB;
  rep.min_slack = min_slack;
  rep.one_plus_tau2_slack = 1.0 + tau * tau * min_slack;
  for (int q = 1; q <= 4; ++q) {
    rep.bq_slack_min[q - 1] = min_bq_slack(q, scan_domain, 500);
  }

  if (!(rep.one_plus_tau2_k3 > 0.0)) {
    rep.failure = "1 + tau^2*k3 <= 0 (tau >= tau3)";
  } else if (rep.min_dB < 0.0) {
    rep.failure = "dB negative on the scan grid";
  } else if (!(rep.one_plus_tau2_slack > 0.0)) {
    rep.failure = "1 + tau^2*inf(B - mu/2*dB) <= 0 on the scan grid";
  } else {
    for (int q = 1; q <= 4; ++q) {
      if (rep.bq_slack_min[q - 1] < 0.0) {
        rep.failure = "b_q slack negative for q=" + std::to_string(q);
        break;
      }
    }
  }
  rep.pass = rep.failure.empty();
  return rep;
}

StabilityReport stability_report(const PolynomialPotential& pot,
                                 std::optional<double> tau, double scan_domain,
                                 long grid) {
  StabilityReport r;
  r.k1 = compute_k1(pot);
  r.tau1 = tau_from_k(r.k1);
  r.k2_est = estimate_k2(pot, scan_domain, grid);
  r.tau2_est = tau_from_k(r.k2_est);
  r.w4 = is_w4(pot);
  if (r.w4) {
    std::tie(r.k3, r.tau3) = compute_k3_tau3(pot);
  } else {
    r.k3 = kNaN;
    r.tau3 = kNaN;
  }
  r.scan_domain = scan_domain;
  r.grid = grid;
  if (tau.has_value()) {
    r.tau = *tau;
    r.c = lower_bound_c(pot, *tau, scan_domain);
    if (r.w4) {
      r.uniqueness = check_uniqueness_criterion(pot, *tau, scan_domain);
    }
  } else {
    r.tau = kNaN;
    r.c = kNaN;
  }
  return r;
}

namespace {

nlohmann::json json_real(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0.0 ? "inf" : "-inf";
}

}  // namespace

std::string stability_report_json(const StabilityReport& report) {
  nlohmann::json j;
  j["k1"] = json_real(report.k1);
  j["tau1"] = json_real(report.tau1);
  j["k2_est"] = json_real(report.k2_est);
  j["tau2_est"] = json_real(report.tau2_est);
  j["w4"] = report.w4;
  if (report.w4) {
    j["k3"] = json_real(report.k3);
    j["tau3"] = json_real(report.tau3);
  }
  j["scan_domain"] = report.scan_domain;
  j["grid"] = report.grid;
  if (std::isfinite(report.tau)) {
    j["tau"] = report.tau;
    j["c"] = json_real(report.c);
  }
  if (report.uniqueness.has_value()) {
    const auto& u = *report.uniqueness;
    nlohmann::json ju;
    ju["pass"] = u.pass;
    ju["one_plus_tau2_k3"] = json_real(u.one_plus_tau2_k3);
    ju["min_dB"] = json_real(u.min_dB);
    ju["min_slack"] = json_real(u.min_slack);
    ju["one_plus_tau2_slack"] = json_real(u.one_plus_tau2_slack);
    ju["bq_slack_min"] = {json_real(u.bq_slack_min[0]), json_real(u.bq_slack_min[1]),
                          json_real(u.bq_slack_min[2]), json_real(u.bq_slack_min[3])};
    if (!u.failure.empty()) ju["failure"] = u.failure;
    j["uniqueness"] = ju;
  }
  return j.dump(2);
}

}  // namespace svwave
