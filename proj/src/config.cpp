#include "svwave/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "svwave/numeric.hpp"

namespace svwave {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
  throw ConfigError("config: " + what);
}

void require_object(const json& j, const char* where) {
  if (!j.is_object()) fail(std::string(where) + " must be a JSON object");
}

void reject_unknown_keys(const json& j, const char* where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) fail(std::string("unknown key \"") + item.key() + "\" in " + where);
  }
}

double get_finite(const json& j, const char* name) {
  if (!j.is_number()) fail(std::string(name) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(std::string(name) + " must be finite");
  return v;
}

long get_integer(const json& j, const char* name) {
  if (!j.is_number_integer()) fail(std::string(name) + " must be an integer");
  return j.get<long>();
}

std::vector<double> get_double_array(const json& j, const char* name) {
  if (!j.is_array()) fail(std::string(name) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(get_finite(e, name));
  return out;
}

std::vector<long> get_long_array(const json& j, const char* name) {
  if (!j.is_array()) fail(std::string(name) + " must be an array of integers");
  std::vector<long> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(get_integer(e, name));
  return out;
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic") return Boundary::periodic;
  if (s == "zero") return Boundary::zero;
  fail("boundary must be \"periodic\" or \"zero\", got \"" + s + "\"");
}

const char* boundary_to_string(Boundary b) {
  return b == Boundary::periodic ? "periodic" : "zero";
}

InitialSpec parse_initial(const json& j, const std::string& base_dir) {
  require_object(j, "initial");
  if (!j.contains("kind") || !j.at("kind").is_string())
    fail("initial.kind must be a string");
  const std::string kind = j.at("kind").get<std::string>();
  InitialSpec spec;
  if (kind == "zero") {
    spec.kind = InitialSpec::Kind::zero;
    reject_unknown_keys(j, "initial (kind zero)", {"kind"});
  } else if (kind == "gaussian_pulse") {
    spec.kind = InitialSpec::Kind::gaussian_pulse;
    reject_unknown_keys(j, "initial (kind gaussian_pulse)",
                        {"kind", "center", "width", "amplitude"});
    if (j.contains("center"))
      spec.center = get_double_array(j.at("center"), "initial.center");
    if (j.contains("width"))
      spec.width = get_finite(j.at("width"), "initial.width");
    if (spec.width <= 0.0) fail("initial.width must be > 0");
    if (j.contains("amplitude"))
      spec.amplitude = get_finite(j.at("amplitude"), "initial.amplitude");
  } else if (kind == "plane_wave") {
    spec.kind = InitialSpec::Kind::plane_wave;
    reject_unknown_keys(j, "initial (kind plane_wave)",
                        {"kind", "mode", "amplitude"});
    if (!j.contains("mode")) fail("initial.mode is required for plane_wave");
    spec.mode = get_long_array(j.at("mode"), "initial.mode");
    if (j.contains("amplitude"))
      spec.amplitude = get_finite(j.at("amplitude"), "initial.amplitude");
  } else if (kind == "random") {
    spec.kind = InitialSpec::Kind::random;
    reject_unknown_keys(j, "initial (kind random)", {"kind", "l2_norm"});
    if (j.contains("l2_norm"))
      spec.l2_norm = get_finite(j.at("l2_norm"), "initial.l2_norm");
    if (spec.l2_norm <= 0.0) fail("initial.l2_norm must be > 0");
  } else if (kind == "file") {
    spec.kind = InitialSpec::Kind::file;
    reject_unknown_keys(j, "initial (kind file)", {"kind", "snapshot"});
    if (!j.contains("snapshot") || !j.at("snapshot").is_string())
      fail("initial.snapshot must name a snapshot sidecar file");
    std::filesystem::path p = j.at("snapshot").get<std::string>();
    if (p.is_relative() && !base_dir.empty())
      p = std::filesystem::path(base_dir) / p;
    spec.snapshot = p.lexically_normal().string();
  } else {
    fail("initial.kind must be one of zero, gaussian_pulse, plane_wave, "
         "random, file; got \"" +
         kind + "\"");
  }
  return spec;
}

}  // namespace

LatticeShape RunConfig::shape() const {
  return make_shape(dims, epsilon, boundary);
}

PolynomialPotential RunConfig::potential() const {
  if (!site_coeffs.empty()) return PolynomialPotential(mass, site_coeffs);
  return PolynomialPotential(mass, coeffs);
}

double RunConfig::resolve_tau() const {
  if (tau.has_value() == ratio.has_value())
    throw ConfigError("config: give exactly one of tau and ratio");
  return tau ? *tau : *ratio * epsilon;
}

PolynomialPotential potential_from_json(const nlohmann::json& j) {
  require_object(j, "potential");
  reject_unknown_keys(j, "potential", {"mass", "coeffs", "site_coeffs"});
  if (!j.contains("mass")) fail("potential.mass is required");
  const double mass = get_finite(j.at("mass"), "potential.mass");
  const bool has_coeffs = j.contains("coeffs");
  const bool has_site = j.contains("site_coeffs");
  if (has_coeffs == has_site)
    fail("potential needs exactly one of coeffs and site_coeffs");
  if (has_coeffs)
    return PolynomialPotential(mass,
                               get_double_array(j.at("coeffs"), "potential.coeffs"));
  const json& rows = j.at("site_coeffs");
  if (!rows.is_array() || rows.empty())
    fail("potential.site_coeffs must be a nonempty array of rows");
  std::vector<std::vector<double>> table;
  table.reserve(rows.size());
  for (const auto& row : rows)
    table.push_back(get_double_array(row, "potential.site_coeffs row"));
  return PolynomialPotential(mass, table);
}

RunConfig parse_config(const nlohmann::json& j, const std::string& base_dir) {
  require_object(j, "config");
  reject_unknown_keys(j, "config",
                      {"shape", "N", "tau", "ratio", "steps", "potential",
                       "initial", "output", "admissibility", "seed", "workers",
                       "stability"});
  RunConfig cfg;

  if (!j.contains("shape")) fail("shape is required");
  const json& sh = j.at("shape");
  require_object(sh, "shape");
  reject_unknown_keys(sh, "shape", {"dims", "epsilon", "boundary"});
  if (!sh.contains("dims")) fail("shape.dims is required");
  cfg.dims = get_long_array(sh.at("dims"), "shape.dims");
  if (!sh.contains("epsilon")) fail("shape.epsilon is required");
  cfg.epsilon = get_finite(sh.at("epsilon"), "shape.epsilon");
  if (sh.contains("boundary")) {
    if (!sh.at("boundary").is_string()) fail("shape.boundary must be a string");
    cfg.boundary = boundary_from_string(sh.at("boundary").get<std::string>());
  }

  if (j.contains("N")) {
    const long n = get_integer(j.at("N"), "N");
    if (n < 1) fail("N must be >= 1");
    cfg.N = static_cast<int>(n);
  }

  if (j.contains("tau")) {
    const double t = get_finite(j.at("tau"), "tau");
    if (t <= 0.0) fail("tau must be > 0");
    cfg.tau = t;
  }
  if (j.contains("ratio")) {
    const double r = get_finite(j.at("ratio"), "ratio");
    if (r <= 0.0) fail("ratio must be > 0");
    cfg.ratio = r;
  }
  if (cfg.tau.has_value() == cfg.ratio.has_value())
    fail("give exactly one of tau and ratio");

  if (j.contains("steps")) {
    cfg.steps = get_integer(j.at("steps"), "steps");
    if (cfg.steps < 1) fail("steps must be >= 1");
  }

  if (!j.contains("potential")) fail("potential is required");
  const json& pj = j.at("potential");
  {
    PolynomialPotential pot = potential_from_json(pj);  // validates
    cfg.mass = pot.mass();
  }
  if (pj.contains("coeffs"))
    cfg.coeffs = get_double_array(pj.at("coeffs"), "potential.coeffs");
  else
    for (const auto& row : pj.at("site_coeffs"))
      cfg.site_coeffs.push_back(
          get_double_array(row, "potential.site_coeffs row"));

  if (j.contains("initial")) cfg.initial = parse_initial(j.at("initial"), base_dir);

  if (j.contains("output")) {
    const json& oj = j.at("output");
    require_object(oj, "output");
    reject_unknown_keys(oj, "output",
                        {"series_every", "snapshot_every", "out_dir"});
    if (oj.contains("series_every")) {
      cfg.output.series_every = get_integer(oj.at("series_every"), "output.series_every");
      if (cfg.output.series_every < 1) fail("output.series_every must be >= 1");
    }
    if (oj.contains("snapshot_every")) {
      cfg.output.snapshot_every =
          get_integer(oj.at("snapshot_every"), "output.snapshot_every");
      if (cfg.output.snapshot_every < 0)
        fail("output.snapshot_every must be >= 0");
    }
    if (oj.contains("out_dir")) {
      if (!oj.at("out_dir").is_string()) fail("output.out_dir must be a string");
      cfg.output.out_dir = oj.at("out_dir").get<std::string>();
    }
  }

  if (j.contains("admissibility")) {
    if (!j.at("admissibility").is_string())
      fail("admissibility must be a string");
    const std::string a = j.at("admissibility").get<std::string>();
    if (a == "strict")
      cfg.admissibility = Admissibility::strict;
    else if (a == "permissive")
      cfg.admissibility = Admissibility::permissive;
    else
      fail("admissibility must be \"strict\" or \"permissive\", got \"" + a + "\"");
  }

  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (s.is_number_unsigned())
      cfg.seed = s.get<std::uint64_t>();
    else if (s.is_number_integer() && s.get<long long>() >= 0)
      cfg.seed = static_cast<std::uint64_t>(s.get<long long>());
    else
      fail("seed must be a nonnegative integer");
  }

  if (j.contains("workers")) {
    const long w = get_integer(j.at("workers"), "workers");
    if (w < 1) fail("workers must be >= 1");
    cfg.workers = static_cast<int>(w);
  }

  if (j.contains("stability")) {
    const json& st = j.at("stability");
    require_object(st, "stability");
    reject_unknown_keys(st, "stability", {"scan_domain", "grid"});
    if (st.contains("scan_domain")) {
      cfg.stability.scan_domain =
          get_finite(st.at("scan_domain"), "stability.scan_domain");
      if (cfg.stability.scan_domain <= 0.0)
        fail("stability.scan_domain must be > 0");
    }
    if (st.contains("grid")) {
      cfg.stability.grid = get_integer(st.at("grid"), "stability.grid");
      if (cfg.stability.grid < 100) fail("stability.grid must be >= 100");
    }
  }

  // eager structural validation beyond the field-level checks
  const LatticeShape shape = cfg.shape();
  cfg.potential().require_site_count(shape.sites());
  (void)cfg.resolve_tau();
  if (cfg.initial.kind == InitialSpec::Kind::gaussian_pulse &&
      !cfg.initial.center.empty() &&
      cfg.initial.center.size() != static_cast<std::size_t>(shape.n))
    fail("initial.center must have one entry per axis");
  if (cfg.initial.kind == InitialSpec::Kind::plane_wave) {
    if (cfg.initial.mode.size() != static_cast<std::size_t>(shape.n))
      fail("initial.mode must have one entry per axis");
    for (int d = 0; d < shape.n; ++d)
      if (cfg.initial.mode[d] < 0 || cfg.initial.mode[d] >= shape.dims[d])
        fail("initial.mode entries must lie in [0, L_j)");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("malformed JSON in " + path + ": " + e.what());
  }
  // a run summary embeds its resolved config; accept it directly
  if (j.is_object() && j.contains("config") && j.at("config").is_object())
    j = j.at("config");
  const std::string base =
      std::filesystem::path(path).parent_path().string();
  return parse_config(j, base);
}

nlohmann::json config_json(const RunConfig& cfg) {
  json j;
  j["shape"] = {{"dims", cfg.dims},
                {"epsilon", cfg.epsilon},
                {"boundary", boundary_to_string(cfg.boundary)}};
  j["N"] = cfg.N;
  j["tau"] = cfg.resolve_tau();
  j["steps"] = cfg.steps;
  if (!cfg.site_coeffs.empty())
    j["potential"] = {{"mass", cfg.mass}, {"site_coeffs", cfg.site_coeffs}};
  else
    j["potential"] = {{"mass", cfg.mass}, {"coeffs", cfg.coeffs}};
  json init;
  switch (cfg.initial.kind) {
    case InitialSpec::Kind::zero:
      init = {{"kind", "zero"}};
      break;
    case InitialSpec::Kind::gaussian_pulse:
      init = {{"kind", "gaussian_pulse"},
              {"width", cfg.initial.width},
              {"amplitude", cfg.initial.amplitude}};
      if (!cfg.initial.center.empty()) init["center"] = cfg.initial.center;
      break;
    case InitialSpec::Kind::plane_wave:
      init = {{"kind", "plane_wave"},
              {"mode", cfg.initial.mode},
              {"amplitude", cfg.initial.amplitude}};
      break;
    case InitialSpec::Kind::random:
      init = {{"kind", "random"}, {"l2_norm", cfg.initial.l2_norm}};
      break;
    case InitialSpec::Kind::file:
      init = {{"kind", "file"},
              {"snapshot",
               std::filesystem::absolute(cfg.initial.snapshot).string()}};
      break;
  }
  j["initial"] = init;
  j["output"] = {{"series_every", cfg.output.series_every},
                 {"snapshot_every", cfg.output.snapshot_every},
                 {"out_dir", cfg.output.out_dir}};
  j["admissibility"] =
      cfg.admissibility == Admissibility::strict ? "strict" : "permissive";
  j["seed"] = cfg.seed;
  j["workers"] = cfg.workers;
  j["stability"] = {{"scan_domain", cfg.stability.scan_domain},
                    {"grid", cfg.stability.grid}};
  return j;
}

}  // namespace svwave
