#include "svwave/run.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "json.hpp"
#include "svwave/initial.hpp"
#include "svwave/numeric.hpp"
#include "svwave/observables.hpp"
#include "svwave/snapshot.hpp"
#include "svwave/stepper.hpp"
#include "svwave/wellposed.hpp"

namespace svwave {

namespace {

using nlohmann::json;

json jreal(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0.0 ? "inf" : "-inf";
}

std::string csv_row(const ObservableRecord& rec, long max_site_iters) {
  std::string row = std::to_string(rec.t);
  row += ',';
  row += format17(rec.energy);
  row += ',';
  if (rec.energy_sv) row += format17(*rec.energy_sv);
  row += ',';
  row += format17(rec.charge_raw);
  row += ',';
  row += format17(rec.charge_phys);
  row += ',';
  row += format17(rec.l2_sq);
  row += ',';
  if (rec.apriori_margin) row += format17(*rec.apriori_margin);
  row += ',';
  row += std::to_string(max_site_iters);
  row += '\n';
  return row;
}

struct Gate {
  bool admitted = false;
  std::string name;     // which condition admitted the mesh
  std::string refusal;  // human-readable reason otherwise
};

Gate admissibility_gate(const RunConfig& cfg, const StabilityReport& rep,
                        double tau) {
  Gate g;
  if (!(rep.c > 0.0)) {
    g.refusal = "the divided-difference lower bound c = 1 + tau^2 k1 = " +
                format17(rep.c) + " is not positive at tau = " + format17(tau);
    return g;
  }
  if (cfg.admissibility == Admissibility::permissive) {
    if (tau < rep.tau1) {
      g.admitted = true;
      g.name = "tau_below_tau1";
    } else {
      g.refusal = "permissive admissibility requires tau < tau1; tau = " +
                  format17(tau) + ", tau1 = " + format17(rep.tau1);
    }
    return g;
  }
  if (tau < rep.tau2_est) {
    g.admitted = true;
    g.name = "tau_below_tau2_est";
    return g;
  }
  if (rep.uniqueness && rep.uniqueness->pass) {
    g.admitted = true;
    g.name = "uniqueness_criterion";
    return g;
  }
  g.refusal = "strict admissibility refused: tau = " + format17(tau) +
              " is not below tau2_est = " + format17(rep.tau2_est);
  if (rep.uniqueness)
    g.refusal += " and the uniqueness criterion failed (" +
                 rep.uniqueness->failure + ")";
  else
    g.refusal += " and the uniqueness criterion is unavailable (potential "
                 "outside the degree-4 nonnegative class)";
  g.refusal += "; decrease tau or use admissibility = \"permissive\"";
  return g;
}

}  // namespace

RunResult run(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  RunResult res;
  try {
    const LatticeShape shape = cfg.shape();
    const PolynomialPotential pot = cfg.potential();
    pot.require_site_count(shape.sites());
    const double tau = cfg.resolve_tau();

    const StabilityReport rep = stability_report(
        pot, tau, cfg.stability.scan_domain, cfg.stability.grid);
    const Gate gate = admissibility_gate(cfg, rep, tau);
    if (!gate.admitted) {
      err << gate.refusal << "\n";
      res.exit_code = 2;
      res.status = "refused";
      res.message = gate.refusal;
      return res;
    }

    InitialData init = generate_initial(cfg.initial, shape, cfg.N, pot, tau,
                                        cfg.seed);
    SimState state;
    state.prev = std::move(init.psi0);
    state.curr = std::move(init.psi1);
    state.step_index = init.step_index;
    state.tau = tau;
    state.shape = shape;

    const long t0 = state.step_index - 1;
    const long t_end = t0 + cfg.steps;
    const bool sv_enabled = is_real_1d(state);
    const bool positive_mode =
        tau * tau * shape.n <=
        shape.epsilon * shape.epsilon * (1.0 + 1e-12);
    const double drift_floor = shape.cell_measure();

    log << "admissibility: policy="
        << (cfg.admissibility == Admissibility::strict ? "strict"
                                                       : "permissive")
        << " gate=" << gate.name << " tau=" << format17(tau)
        << " c=" << format17(rep.c) << "\n";
    if (!positive_mode)
      log << "note: tau/eps exceeds 1/sqrt(n); the discrete energy is not "
             "positive definite in this regime\n";

    std::filesystem::create_directories(cfg.output.out_dir);
    const std::filesystem::path out_dir(cfg.output.out_dir);
    const std::string series_path = (out_dir / "series.csv").string();
    std::ofstream csv(series_path, std::ios::binary);
    if (!csv)
      throw ConfigError("cannot open series file for writing: " + series_path);
    csv << "t,E,E_sv,Q_raw,Q_phys,l2_sq,apriori_margin,max_site_iters\n";

    SolverParams params;
    double E0 = 0.0, Q0 = 0.0, Q0_phys = 0.0, l2_0 = 0.0;
    double max_e_abs = 0.0, max_q_abs = 0.0;
    long max_iters = 0, last_step_iters = 0, last_snapshot_t = t0 - 1;
    std::string failure_status, failure_message;
    json failure_detail;

    for (long t = t0; t <= t_end; ++t) {
      ObservableRecord rec;
      rec.t = t;
      rec.energy = energy(state, pot);
      if (sv_enabled) rec.energy_sv = energy_sv(state, pot);
      const auto [q_raw, q_phys] = charge(state);
      rec.charge_raw = q_raw;
      rec.charge_phys = q_phys;
      rec.l2_sq = l2_norm_sq(state.prev, shape);
      if (cfg.mass > 0.0)
        rec.apriori_margin =
            4.0 * rec.energy / (cfg.mass * cfg.mass) - rec.l2_sq;

      if (t == t0) {
        E0 = rec.energy;
        Q0 = rec.charge_raw;
        Q0_phys = rec.charge_phys;
        l2_0 = rec.l2_sq;
      } else {
        max_e_abs = std::max(max_e_abs, std::abs(rec.energy - E0));
        max_q_abs = std::max(max_q_abs, std::abs(rec.charge_raw - Q0));
      }

      const bool emit = t == t0 || t == t_end ||
                        t % cfg.output.series_every == 0;
      if (emit) {
        csv << csv_row(rec, last_step_iters);
        ++res.rows_written;
      }

      if (!std::isfinite(rec.energy) || !std::isfinite(rec.charge_raw) ||
          !std::isfinite(rec.l2_sq)) {
        failure_status = "non_finite_observable";
        failure_message =
            "non-finite observable at t = " + std::to_string(t);
        failure_detail = {{"t", t}};
        break;
      }

      if (cfg.output.snapshot_every > 0 && t > t0 &&
          (t % cfg.output.snapshot_every == 0 || t == t_end) &&
          t != last_snapshot_t) {
        write_snapshot(cfg.output.out_dir, "snap_t" + std::to_string(t), state);
        last_snapshot_t = t;
      }

      if (t == t_end) break;
      try {
        StepResult sr = step(state, pot, params, rep.c, cfg.workers);
        state = std::move(sr.state);
        last_step_iters = sr.stats.max_iterations;
        max_iters = std::max(max_iters, last_step_iters);
      } catch (const StepFailure& e) {
        failure_status = "step_failure";
        failure_message = "numerical failure stepping t = " +
                          std::to_string(t) + " -> " + std::to_string(t + 1) +
                          ": " + e.what();
        failure_detail = {{"t", t},
                          {"site", e.site()},
                          {"residual", jreal(e.residual())},
                          {"iterations", e.iterations()}};
        break;
      }
    }
    csv.close();

    const double e_scale = std::max(std::abs(E0), drift_floor);
    const double q_scale = std::max(std::abs(Q0), drift_floor);
    res.initial_energy = E0;
    res.initial_charge_raw = Q0;
    res.max_energy_drift_rel = max_e_abs / e_scale;
    res.max_charge_drift_rel = max_q_abs / q_scale;
    res.max_solver_iterations = max_iters;
    res.series_path = series_path;
    res.wall_time_s = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();

    const bool ok = failure_status.empty();
    res.exit_code = ok ? 0 : 1;
    res.status = ok ? "ok" : failure_status;
    res.message = failure_message;

    json summary;
    summary["status"] = res.status;
    summary["exit_code"] = res.exit_code;
    summary["t_first"] = t0;
    summary["t_last"] = state.step_index - 1;
    summary["steps_requested"] = cfg.steps;
    summary["initial"] = {{"energy", jreal(E0)},
                          {"charge_raw", jreal(Q0)},
                          {"charge_phys", jreal(Q0_phys)},
                          {"l2_sq", jreal(l2_0)}};
    summary["max_drift"] = {{"energy_abs", jreal(max_e_abs)},
                            {"energy_rel", jreal(res.max_energy_drift_rel)},
                            {"charge_raw_abs", jreal(max_q_abs)},
                            {"charge_raw_rel", jreal(res.max_charge_drift_rel)}};
    summary["max_solver_iterations"] = max_iters;
    summary["wall_time_s"] = res.wall_time_s;
    summary["energy_positive_definite_mode"] = positive_mode;
    summary["sv_energy_enabled"] = sv_enabled;
    json adm = {{"policy", cfg.admissibility == Admissibility::strict
                               ? "strict"
                               : "permissive"},
                {"gate", gate.name},
                {"tau", jreal(tau)},
                {"tau1", jreal(rep.tau1)},
                {"tau2_est", jreal(rep.tau2_est)},
                {"c", jreal(rep.c)}};
    if (rep.w4) adm["tau3"] = jreal(rep.tau3);
    summary["admissibility"] = adm;
    summary["rows_written"] = res.rows_written;
    summary["series"] = "series.csv";
    if (!ok) summary["failure"] = failure_detail;
    summary["config"] = config_json(cfg);

    const std::string summary_path = (out_dir / "summary.json").string();
    std::ofstream sum(summary_path, std::ios::binary);
    if (!sum)
      throw ConfigError("cannot open summary file for writing: " +
                        summary_path);
    sum << summary.dump(2) << "\n";
    res.summary_path = summary_path;

    if (ok) {
      log << "ok: " << cfg.steps << " steps, max energy drift (rel) "
          << format17(res.max_energy_drift_rel) << ", max charge drift (rel) "
          << format17(res.max_charge_drift_rel) << ", wall "
          << format17(res.wall_time_s) << " s\n";
    } else {
      err << res.message << "\n";
    }
    return res;
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    res.exit_code = 2;
    res.status = "config_error";
    res.message = e.what();
    return res;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    res.exit_code = 1;
    res.status = "internal_error";
    res.message = e.what();
    return res;
  }
}

}  // namespace svwave
