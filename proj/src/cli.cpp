#include "svwave/cli.hpp"

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "svwave/config.hpp"
#include "svwave/initial.hpp"
#include "svwave/numeric.hpp"
#include "svwave/run.hpp"
#include "svwave/wellposed.hpp"

namespace svwave {

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open config file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: malformed JSON in " + path + ": " + e.what());
  }
}

/// check-potential accepts either a full run config or a minimal
/// {"potential": {...}} file, optionally with tau (or ratio + shape.epsilon)
/// and a stability section; anything else in the file is ignored.
int check_potential(const std::string& path, std::ostream& out) {
  json j = read_json_file(path);
  if (j.is_object() && j.contains("config") && j.at("config").is_object())
    j = j.at("config");
  if (!j.is_object() || !j.contains("potential"))
    throw ConfigError("config: check-potential needs a \"potential\" object");
  const PolynomialPotential pot = potential_from_json(j.at("potential"));

  std::optional<double> tau;
  if (j.contains("tau")) {
    tau = j.at("tau").get<double>();
  } else if (j.contains("ratio")) {
    if (!j.contains("shape") || !j.at("shape").contains("epsilon"))
      throw ConfigError(
          "config: ratio needs shape.epsilon to resolve a tau");
    tau = j.at("ratio").get<double>() *
          j.at("shape").at("epsilon").get<double>();
  }
  double scan_domain = 10.0;
  long grid = 1000;
  if (j.contains("stability")) {
    const json& st = j.at("stability");
    if (st.contains("scan_domain")) scan_domain = st.at("scan_domain").get<double>();
    if (st.contains("grid")) grid = st.at("grid").get<long>();
  }
  out << stability_report_json(stability_report(pot, tau, scan_domain, grid))
      << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Strauss-Vazquez lattice simulator for U(1)-invariant "
               "nonlinear Klein-Gordon equations"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "execute a configured simulation");
  std::string run_config;
  run_cmd->add_option("--config", run_config, "config JSON file")->required();
  long steps_override = 0;
  auto* steps_opt =
      run_cmd->add_option("--steps", steps_override, "override steps");
  std::string out_override;
  auto* out_opt =
      run_cmd->add_option("--out", out_override, "override output.out_dir");
  std::uint64_t seed_override = 0;
  auto* seed_opt = run_cmd->add_option("--seed", seed_override, "override seed");
  int workers_override = 0;
  auto* workers_opt =
      run_cmd->add_option("--workers", workers_override, "override workers");

  auto* check_cmd = app.add_subcommand(
      "check-potential", "print the well-posedness report for a potential");
  std::string check_config;
  check_cmd->add_option("--config", check_config, "config JSON file")
      ->required();

  auto* disp_cmd = app.add_subcommand(
      "dispersion", "print the discrete plane-wave frequency for a mode");
  std::string disp_config;
  disp_cmd->add_option("--config", disp_config, "config JSON file")->required();
  std::vector<long> disp_mode;
  disp_cmd
      ->add_option("--mode", disp_mode, "integer mode vector, comma separated")
      ->required()
      ->delimiter(',');

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(run_cmd)) {
      RunConfig cfg = load_config(run_config);
      if (steps_opt->count() > 0) {
        if (steps_override < 1) throw ConfigError("config: steps must be >= 1");
        cfg.steps = steps_override;
      }
      if (out_opt->count() > 0) cfg.output.out_dir = out_override;
      if (seed_opt->count() > 0) cfg.seed = seed_override;
      if (workers_opt->count() > 0) {
        if (workers_override < 1)
          throw ConfigError("config: workers must be >= 1");
        cfg.workers = workers_override;
      }
      return run(cfg, out, err).exit_code;
    }
    if (app.got_subcommand(check_cmd)) return check_potential(check_config, out);
    if (app.got_subcommand(disp_cmd)) {
      RunConfig cfg = load_config(disp_config);
      const double omega =
          dispersion_omega(cfg.shape(), disp_mode, cfg.mass, cfg.resolve_tau());
      out << format17(omega) << "\n";
      return 0;
    }
    err << "no subcommand given\n";
    return 2;
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace svwave
