#include "svwave/potential.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "svwave/numeric.hpp"

namespace svwave {

namespace {

// Negative intensities only arise from rounding in |.|^2 arithmetic; treat a
// tiny negative as zero, reject anything genuinely negative.
double clamp_lambda(double lambda, const char* what) {
  if (lambda < 0.0) {
    if (lambda >= -1e-15) return 0.0;
    throw ConfigError(std::string(what) + ": negative intensity " +
                      format17(lambda));
  }
  return lambda;
}

}  // namespace

double bq(int q, double lambda, double mu) {
  // b_0 = 1, b_q = lambda*b_{q-1} + mu^q
  double b = 1.0;
  double mu_pow = 1.0;
  for (int k = 1; k <= q; ++k) {
    mu_pow *= mu;
    b = lambda * b + mu_pow;
  }
  return b;
}

double dbq(int q, double lambda, double mu) {
  // d_0 = 0, d_q = b_{q-1} + lambda*d_{q-1}
  double b = 1.0;  // b_{k-1} entering iteration k
  double d = 0.0;
  double mu_pow = 1.0;
  for (int k = 1; k <= q; ++k) {
    d = b + lambda * d;
    mu_pow *= mu;
    b = lambda * b + mu_pow;
  }
  return d;
}

PolynomialPotential::PolynomialPotential(double mass, std::vector<double> coeffs)
    : mass_(mass),
      mass_sq_half_(0.5 * mass * mass),
      n_coeff_(coeffs.size()),
      n_sites_(1),
      homogeneous_(std::move(coeffs)) {
  if (!(mass >= 0.0) || !std::isfinite(mass)) {
    throw ConfigError("potential: mass must be finite and >= 0, got " +
                      format17(mass));
  }
  if (homogeneous_.empty()) {
    throw ConfigError("potential: empty coefficient list");
  }
  for (double c : homogeneous_) {
    if (!std::isfinite(c)) throw ConfigError("potential: non-finite coefficient");
  }
}

PolynomialPotential::PolynomialPotential(double mass,
                                         std::vector<std::vector<double>> site_coeffs)
    : mass_(mass), mass_sq_half_(0.5 * mass * mass) {
  if (!(mass >= 0.0) || !std::isfinite(mass)) {
    throw ConfigError("potential: mass must be finite and >= 0, got " +
                      format17(mass));
  }
  if (site_coeffs.empty()) {
    throw ConfigError("potential: empty site coefficient table");
  }
  n_sites_ = static_cast<long>(site_coeffs.size());
  n_coeff_ = site_coeffs.front().size();
  if (n_coeff_ == 0) {
    throw ConfigError("potential: empty coefficient list");
  }
  site_rows_.reserve(static_cast<std::size_t>(n_sites_) * n_coeff_);
  for (const auto& row : site_coeffs) {
    if (row.size() != n_coeff_) {
      throw ConfigError("potential: ragged site coefficient table");
    }
    for (double c : row) {
      if (!std::isfinite(c)) throw ConfigError("potential: non-finite coefficient");
      site_rows_.push_back(c);
    }
  }
}

std::span<const double> PolynomialPotential::coeffs(long site) const {
  if (site_rows_.empty()) {
    return {homogeneous_.data(), n_coeff_};
  }
  if (site < 0 || site >= n_sites_) {
    throw ConfigError("potential: site index " + std::to_string(site) +
                      " out of range [0," + std::to_string(n_sites_) + ")");
  }
  return {site_rows_.data() + static_cast<std::size_t>(site) * n_coeff_, n_coeff_};
}

void PolynomialPotential::require_site_count(long sites) const {
  if (!site_rows_.empty() && n_sites_ != sites) {
    throw ConfigError("potential: coefficient table has " +
                      std::to_string(n_sites_) + " rows but lattice has " +
                      std::to_string(sites) + " sites");
  }
}

double PolynomialPotential::V(long site, double lambda) const {
  lambda = clamp_lambda(lambda, "V");
  auto C = coeffs(site);
  // Horner in lambda for sum_q C_q lambda^{q+1}
  double acc = 0.0;
  for (std::size_t q = n_coeff_; q-- > 0;) {
    acc = acc * lambda + C[q];
  }
  return mass_sq_half_ * lambda + acc * lambda;
}

double PolynomialPotential::dV(long site, double lambda) const {
  lambda = clamp_lambda(lambda, "dV");
  auto C = coeffs(site);
  // d/dl sum_q C_q l^{q+1} = sum_q (q+1) C_q l^q
  double acc = 0.0;
  for (std::size_t q = n_coeff_; q-- > 0;) {
    acc = acc * lambda + static_cast<double>(q + 1) * C[q];
  }
  return mass_sq_half_ + acc;
}

double PolynomialPotential::B(long site, double lambda, double mu) const {
  lambda = clamp_lambda(lambda, "B");
  mu = clamp_lambda(mu, "B");
  // Sorting the arguments makes the evaluation bitwise symmetric; B itself
  // is symmetric, so this changes nothing mathematically.
  if (lambda < mu) std::swap(lambda, mu);
  auto C = coeffs(site);
  // b_q recurrence shared across all q: b_q = lambda*b_{q-1} + mu^q.
  double acc = mass_sq_half_;
  double b = 1.0;
  double mu_pow = 1.0;
  acc += C[0] * b;
  for (std::size_t q = 1; q < n_coeff_; ++q) {
    mu_pow *= mu;
    b = lambda * b + mu_pow;
    acc += C[q] * b;
  }
  return acc;
}

double PolynomialPotential::dB(long site, double lambda, double mu) const {
  lambda = clamp_lambda(lambda, "dB");
  mu = clamp_lambda(mu, "dB");
  // No argument sort here: dB is the derivative in the FIRST argument and is
  // not symmetric.
  auto C = coeffs(site);
  double acc = 0.0;  // d_0 = 0 contributes nothing for q = 0
  double b = 1.0;
  double d = 0.0;
  double mu_pow = 1.0;
  for (std::size_t q = 1; q < n_coeff_; ++q) {
    d = b + lambda * d;
    mu_pow *= mu;
    b = lambda * b + mu_pow;
    acc += C[q] * d;
  }
  return acc;
}

}  // namespace svwave
