// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion is self-contained and uses independent tolerances.
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "svwave/config.hpp"
#include "svwave/initial.hpp"
#include "svwave/lattice.hpp"
#include "svwave/numeric.hpp"
#include "svwave/observables.hpp"
#include "svwave/potential.hpp"
#include "svwave/run.hpp"
#include "svwave/stepper.hpp"
#include "svwave/wellposed.hpp"

namespace {

namespace fs = std::filesystem;
using svwave::Boundary;
using svwave::FieldSlice;
using svwave::InitialSpec;
using svwave::PolynomialPotential;
using svwave::RunConfig;
using svwave::SimState;
using svwave::SolverParams;
using svwave::SplitMix64;

struct CriterionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& detail) {
  if (!cond) throw CriterionFailure(detail);
}

std::string num(double v) { return svwave::format17(v); }

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::path("acceptance_out") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  require(in.good(), "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SimState random_state(const svwave::LatticeShape& shape, int N, double tau,
                      std::uint64_t seed, double amp, bool real = false) {
  SimState st;
  st.shape = shape;
  st.tau = tau;
  st.step_index = 1;
  st.prev = FieldSlice::zeros(shape, N);
  st.curr = FieldSlice::zeros(shape, N);
  SplitMix64 rng(seed);
  for (auto& v : st.prev.values)
    v = {amp * rng.normal(), real ? 0.0 : amp * rng.normal()};
  for (auto& v : st.curr.values)
    v = {amp * rng.normal(), real ? 0.0 : amp * rng.normal()};
  return st;
}

double max_abs(const FieldSlice& a) {
  double m = 0.0;
  for (auto v : a.values) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const FieldSlice& a, const FieldSlice& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

RunConfig base_run_config(const fs::path& out_dir) {
  RunConfig cfg;
  cfg.dims = {128};
  cfg.epsilon = 1.0;
  cfg.boundary = Boundary::periodic;
  cfg.N = 1;
  cfg.ratio = 1.0;
  cfg.steps = 10000;
  cfg.mass = 1.0;
  cfg.coeffs = {0.0, 1.0};  // W = lambda^2 (cubic nonlinearity in the field)
  cfg.output.series_every = 1000;
  cfg.output.snapshot_every = 0;
  cfg.output.out_dir = out_dir.string();
  return cfg;
}

svwave::RunResult run_or_fail(const RunConfig& cfg) {
  std::ostringstream log, err;
  auto res = svwave::run(cfg, log, err);
  require(res.exit_code == 0,
          "run exited " + std::to_string(res.exit_code) + ": " + res.message +
              " " + err.str());
  return res;
}

// --- criteria ---------------------------------------------------------------

std::string c1_energy_conservation() {
  RunConfig cfg = base_run_config(fresh_dir("c1"));
  cfg.initial.kind = InitialSpec::Kind::gaussian_pulse;
  cfg.initial.center = {64.0};
  cfg.initial.width = 6.0;
  cfg.initial.amplitude = 0.8;
  const auto res = run_or_fail(cfg);
  const double abs_drift =
      res.max_energy_drift_rel * std::max(std::abs(res.initial_energy), 1.0);
  const double rel = abs_drift / std::abs(res.initial_energy);
  require(rel <= 1e-9, "energy drift " + num(rel) + " > 1e-9");
  return "max relative energy drift " + num(rel) + " over 10^4 steps";
}

std::string c2_charge_conservation() {
  RunConfig cfg = base_run_config(fresh_dir("c2a"));
  cfg.initial.kind = InitialSpec::Kind::plane_wave;
  cfg.initial.mode = {3};
  cfg.initial.amplitude = 0.8;
  const auto res = run_or_fail(cfg);
  require(std::abs(res.initial_charge_raw) > 1.0,
          "degenerate initial charge " + num(res.initial_charge_raw));
  const double abs1 = res.max_charge_drift_rel *
                      std::max(std::abs(res.initial_charge_raw), 1.0);
  const double rel1 = abs1 / std::abs(res.initial_charge_raw);
  require(rel1 <= 1e-9, "1-D charge drift " + num(rel1) + " > 1e-9");

  RunConfig cfg2 = base_run_config(fresh_dir("c2b"));
  cfg2.dims = {32, 32};
  cfg2.ratio = 1.0 / std::sqrt(2.0);
  cfg2.initial.kind = InitialSpec::Kind::plane_wave;
  cfg2.initial.mode = {3, 2};
  cfg2.initial.amplitude = 0.8;
  const auto res2 = run_or_fail(cfg2);
  require(std::abs(res2.initial_charge_raw) > 1.0,
          "degenerate 2-D initial charge " + num(res2.initial_charge_raw));
  const double abs2 = res2.max_charge_drift_rel *
                      std::max(std::abs(res2.initial_charge_raw), 1.0);
  const double rel2 = abs2 / std::abs(res2.initial_charge_raw);
  require(rel2 <= 1e-8, "2-D charge drift " + num(rel2) + " > 1e-8");
  return "Q_raw drift " + num(rel1) + " (1-D, ratio 1), " + num(rel2) +
         " (2-D, ratio 1/sqrt(2)), 10^4 steps each";
}

std::string c3_positivity_and_apriori() {
  // 10^3 random states at admissible ratios with nonnegative potentials
  SplitMix64 seeds(301u);
  const std::vector<std::vector<long>> all_dims = {{4}, {3, 4}, {3, 3, 3}};
  for (int trial = 0; trial < 1000; ++trial) {
    const auto& dims = all_dims[trial % 3];
    auto shape = svwave::make_shape(dims, 0.5, Boundary::periodic);
    const double r = 0.2 + 0.8 * seeds.uniform();
    const double tau =
        r * shape.epsilon / std::sqrt(static_cast<double>(shape.n));
    PolynomialPotential pot(0.3 + seeds.uniform(),
                            {seeds.uniform(), seeds.uniform(), seeds.uniform()});
    SimState st = random_state(shape, 1, tau, seeds.next(), 1.0);
    const double E = svwave::energy(st, pot);
    require(E >= 0.0, "negative energy " + num(E) + " in trial " +
                          std::to_string(trial));
  }

  // the a priori bound along trajectories, one per dimension
  double worst_margin = 1.0;
  for (int n = 1; n <= 3; ++n) {
    const std::vector<long> dims(static_cast<std::size_t>(n), n == 1 ? 48 : 8);
    auto shape = svwave::make_shape(dims, 0.5, Boundary::periodic);
    const double tau = shape.epsilon / std::sqrt(static_cast<double>(n));
    PolynomialPotential pot(1.0, std::vector<double>{0.2, 0.1});
    SimState st = random_state(shape, 1, tau, 77u + n, 0.6);
    SolverParams params;
    const double c = svwave::lower_bound_c(pot, tau, 10.0);
    const double E0 = svwave::energy(st, pot);
    const double bound = 4.0 * E0 * (1.0 + 1e-9);  // m = 1
    for (int t = 0; t <= 500; ++t) {
      svwave::ObservableRecord rec;
      rec.l2_sq = svwave::l2_norm_sq(st.prev, shape);
      require(svwave::apriori_check(rec, E0, 1.0),
              "a priori bound violated at n=" + std::to_string(n) + ", t=" +
                  std::to_string(t) + ": l2_sq=" + num(rec.l2_sq) +
                  " bound=" + num(bound));
      worst_margin = std::min(worst_margin, 1.0 - rec.l2_sq / bound);
      if (t < 500) st = svwave::step(st, pot, params, c).state;
    }
  }
  return "10^3 states E >= 0; a priori bound held for n=1,2,3 trajectories "
         "(worst headroom fraction " +
         num(worst_margin) + ")";
}

std::string c4_linear_oracle() {
  // (a) slice-wide closed form of the mass-only update
  auto shape = svwave::make_shape({32}, 0.8, Boundary::periodic);
  PolynomialPotential pot(1.0, std::vector<double>{0.0});
  const double tau = 0.5;
  const double denom = 1.0 + tau * tau * 0.5;  // 1 + tau^2 m^2 / 2
  SimState st = random_state(shape, 1, tau, 404u, 0.7);
  SolverParams params;
  const double c = svwave::lower_bound_c(pot, tau, 10.0);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const FieldSlice xi = svwave::compute_xi(st);
    FieldSlice want = st.prev;
    for (std::size_t i = 0; i < want.values.size(); ++i)
      want.values[i] = xi.values[i] / denom - st.prev.values[i];
    st = svwave::step(st, pot, params, c).state;
    worst = std::max(worst, max_abs_diff(st.curr, want) / max_abs(want));
  }
  require(worst <= 1e-13, "linear closed-form mismatch " + num(worst));

  // (b) plane wave tracks its analytic phase evolution
  auto shape2 = svwave::make_shape({64}, 1.0, Boundary::periodic);
  const double A = 0.5;
  const double omega = svwave::dispersion_omega(shape2, {1}, 1.0, 1.0);
  InitialSpec spec;
  spec.kind = InitialSpec::Kind::plane_wave;
  spec.mode = {1};
  spec.amplitude = A;
  auto init = svwave::generate_initial(spec, shape2, 1, pot, 1.0, 0);
  SimState pw;
  pw.prev = init.psi0;
  pw.curr = init.psi1;
  pw.step_index = 1;
  pw.tau = 1.0;
  pw.shape = shape2;
  const double c2 = svwave::lower_bound_c(pot, 1.0, 10.0);
  double worst_pw = 0.0;
  for (int t = 1; t <= 1000; ++t) {
    pw = svwave::step(pw, pot, params, c2).state;
    for (long X = 0; X < 64; ++X) {
      const double theta =
          2.0 * std::numbers::pi * X / 64.0 - omega * (t + 1);
      worst_pw = std::max(
          worst_pw, std::abs(pw.curr.values[X] - std::polar(A, theta)));
    }
  }
  require(worst_pw <= 1e-10 * A,
          "plane-wave phase error " + num(worst_pw) + " > " + num(1e-10 * A));
  return "closed-form mismatch " + num(worst) + " (10^3 steps); plane-wave "
         "deviation " +
         num(worst_pw) + " (10^3 steps)";
}

std::string c5_sv_energy_agreement() {
  auto shape = svwave::make_shape({16}, 0.4, Boundary::periodic);
  PolynomialPotential pot(1.0, std::vector<double>{0.3, 0.1});
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    SimState st = random_state(shape, 1, 0.3, 500u + trial, 1.0, /*real=*/true);
    const double e = svwave::energy(st, pot);
    const double sv = svwave::energy_sv(st, pot);
    worst = std::max(worst, std::abs(sv - e) / std::abs(e));
  }
  require(worst <= 1e-12, "SV energy relative gap " + num(worst));
  return "max |E_SV - E| / |E| = " + num(worst) + " on 100 real 1-D states";
}

std::string c6_uniqueness_machinery() {
  for (int p = 0; p <= 8; ++p) {
    const auto rep = svwave::scan_monomial_arc(p, 10000);
    require(rep.pass && rep.arc_min > 0.0 && rep.reduced_min > 0.0,
            "monomial arc scan not strictly positive at p=" +
                std::to_string(p) + " (arc " + num(rep.arc_min) + ", reduced " +
                num(rep.reduced_min) + ")");
  }
  for (int q = 1; q <= 4; ++q) {
    const double m = svwave::min_bq_slack(q, 10.0, 500);
    require(m >= 0.0, "b_q slack negative at q=" + std::to_string(q) + ": " +
                          num(m));
  }

  // Newton and bisection agree on random site problems under a w4 potential
  PolynomialPotential pot(1.0, std::vector<double>{0.1, 0.2, 0.05, 0.02});
  const double tau = 0.4;
  require(svwave::check_uniqueness_criterion(pot, tau, 10.0).pass,
          "test potential unexpectedly fails the uniqueness criterion");
  const double c = svwave::lower_bound_c(pot, tau, 10.0);
  SplitMix64 rng(600u);
  SolverParams newton, bisect;
  bisect.method = svwave::RootMethod::bisection;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::complex<double>> xi(2), prev(2), out(2);
    for (auto& v : xi) v = {2.0 * rng.normal(), 2.0 * rng.normal()};
    for (auto& v : prev) v = {rng.normal(), rng.normal()};
    const auto rn = svwave::solve_site(xi, prev, tau, 0, pot, newton, c, out);
    const auto rb = svwave::solve_site(xi, prev, tau, 0, pot, bisect, c, out);
    worst = std::max(worst, std::abs(rn.s - rb.s));
  }
  require(worst <= 1e-12, "Newton/bisection root gap " + num(worst));
  return "arc scans positive (p=0..8, 10^4 samples); slack grids nonnegative "
         "(q=1..4, 500^2); root-method gap " +
         num(worst) + " on 10^3 problems";
}

std::string c7_threshold_correctness() {
  SplitMix64 rng(700u);
  double worst_gap = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int deg = 1 + static_cast<int>(rng.next() % 4);
    std::vector<double> coeffs(static_cast<std::size_t>(deg) + 1);
    for (auto& v : coeffs) v = -2.0 + 4.0 * rng.uniform();
    coeffs.back() = 0.05 + std::abs(coeffs.back());
    const double mass = 2.0 * rng.uniform();
    PolynomialPotential pot(mass, coeffs);
    const double got = svwave::compute_k1(pot);

    // dense-scan oracle over [0, R], R from the root bound of dV's derivative
    std::vector<double> dv(coeffs.size());
    for (std::size_t q = 0; q < coeffs.size(); ++q)
      dv[q] = static_cast<double>(q + 1) * coeffs[q];
    dv[0] += 0.5 * mass * mass;
    double max_ratio = 0.0;
    for (std::size_t q = 0; q + 1 < dv.size(); ++q)
      max_ratio = std::max(max_ratio,
                           std::abs(static_cast<double>(q + 1) * dv[q + 1]) /
                               (static_cast<double>(dv.size() - 1) *
                                std::abs(dv.back())));
    const double R = 1.0 + max_ratio;
    const auto eval_dv = [&dv](double lam) {
      double acc = 0.0;
      for (std::size_t q = dv.size(); q-- > 0;) acc = acc * lam + dv[q];
      return acc;
    };
    const long samples = 2000000;
    double scan = dv[0];  // lambda = 0
    long best = 0;
    for (long i = 1; i <= samples; ++i) {
      const double v = eval_dv(R * static_cast<double>(i) / samples);
      if (v < scan) {
        scan = v;
        best = i;
      }
    }
    // refine the winning bracket so the oracle resolves the minimum itself
    const double lo = R * static_cast<double>(std::max<long>(best - 1, 0)) / samples;
    const double hi = R * static_cast<double>(std::min<long>(best + 1, samples)) / samples;
    for (long i = 0; i <= 20000; ++i)
      scan = std::min(scan, eval_dv(lo + (hi - lo) * static_cast<double>(i) / 20000));
    require(scan - got >= -1e-12,
            "k1 above the scan oracle: k1=" + num(got) + " scan=" + num(scan));
    require(scan - got <= 1e-6,
            "k1 misses the scan oracle: k1=" + num(got) + " scan=" + num(scan));
    worst_gap = std::max(worst_gap, scan - got);
  }

  PolynomialPotential marginal(0.0, std::vector<double>{-1.0, 1.0});
  const auto rep = svwave::stability_report(marginal, std::nullopt, 10.0, 1000);
  require(rep.k1 == -1.0, "k1 for the marginal example is " + num(rep.k1));
  require(rep.tau1 == 1.0, "tau1 for the marginal example is " + num(rep.tau1));
  return "k1 within " + num(worst_gap) +
         " of the 2e6-point scan on 50 random confining potentials; marginal "
         "example exact";
}

std::string c8_reversibility_and_gauge() {
  auto shape = svwave::make_shape({24}, 0.5, Boundary::periodic);
  PolynomialPotential pot(1.0, std::vector<double>{0.2, 0.1});
  const double tau = 0.3;
  SolverParams params;
  const double c = svwave::lower_bound_c(pot, tau, 10.0);

  SimState st = random_state(shape, 2, tau, 800u, 0.5);
  const SimState initial = st;
  for (int t = 0; t < 100; ++t) st = svwave::step(st, pot, params, c).state;
  for (int t = 0; t < 100; ++t)
    st = svwave::step_backward(st, pot, params, c).state;
  const double scale = std::max(max_abs(initial.prev), max_abs(initial.curr));
  const double rev =
      std::max(max_abs_diff(st.prev, initial.prev),
               max_abs_diff(st.curr, initial.curr)) /
      scale;
  require(rev <= 1e-8, "reversibility error " + num(rev));
  require(st.step_index == initial.step_index, "step index did not return");

  // global phase commutes with the step
  const std::complex<double> phase = std::polar(1.0, 0.9);
  SimState rotated = initial;
  for (auto& v : rotated.prev.values) v *= phase;
  for (auto& v : rotated.curr.values) v *= phase;
  SimState stepped = svwave::step(initial, pot, params, c).state;
  SimState stepped_rot = svwave::step(rotated, pot, params, c).state;
  for (auto& v : stepped.curr.values) v *= phase;
  const double gauge = max_abs_diff(stepped.curr, stepped_rot.curr) /
                       max_abs(stepped_rot.curr);
  require(gauge <= 1e-12, "gauge commutation error " + num(gauge));
  return "100-step round trip error " + num(rev) + "; phase commutation " +
         num(gauge);
}

std::string c9_determinism() {
  const auto dir1 = fresh_dir("c9_w1");
  const auto dir8 = fresh_dir("c9_w8");
  RunConfig cfg = base_run_config(dir1);
  cfg.dims = {64};
  cfg.N = 2;
  cfg.ratio = 0.9;
  cfg.steps = 500;
  cfg.output.series_every = 1;
  cfg.initial.kind = InitialSpec::Kind::random;
  cfg.initial.l2_norm = 0.8;
  cfg.seed = 123;
  cfg.workers = 1;
  run_or_fail(cfg);
  cfg.output.out_dir = dir8.string();
  cfg.workers = 8;
  run_or_fail(cfg);
  const std::string s1 = slurp(dir1 / "series.csv");
  const std::string s8 = slurp(dir8 / "series.csv");
  require(s1 == s8, "series differ between worker counts 1 and 8");
  require(s1.size() > 1000, "series suspiciously small");
  return "501-row series bitwise identical for worker counts 1 and 8";
}

}  // namespace

int main() {
  struct Entry {
    int index;
    const char* name;
    std::string (*fn)();
  };
  const Entry entries[] = {
      {1, "energy-conservation", c1_energy_conservation},
      {2, "charge-conservation", c2_charge_conservation},
      {3, "energy-positivity-apriori", c3_positivity_and_apriori},
      {4, "linear-oracle-equivalence", c4_linear_oracle},
      {5, "sv-energy-agreement", c5_sv_energy_agreement},
      {6, "uniqueness-machinery", c6_uniqueness_machinery},
      {7, "threshold-correctness", c7_threshold_correctness},
      {8, "reversibility-gauge", c8_reversibility_and_gauge},
      {9, "determinism", c9_determinism},
  };
  int failures = 0;
  for (const auto& e : entries) {
    try {
      const std::string detail = e.fn();
      std::printf("PASS  %d  %-28s %s\n", e.index, e.name, detail.c_str());
    } catch (const std::exception& ex) {
      std::printf("FAIL  %d  %-28s %s\n", e.index, e.name, ex.what());
      ++failures;
    }
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
