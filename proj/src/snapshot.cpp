#include "svwave/snapshot.hpp"

#include <bit>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "svwave/numeric.hpp"

// The raw format is declared little-endian; this implementation writes host
// doubles directly.
static_assert(std::endian::native == std::endian::little,
              "snapshot IO assumes a little-endian host");

namespace svwave {

namespace fs = std::filesystem;

namespace {

void write_raw(const fs::path& path, const FieldSlice& slice) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("snapshot: cannot open " + path.string() + " for writing");
  // std::complex<double> is layout-compatible with double[2] = {re, im}
  out.write(reinterpret_cast<const char*>(slice.values.data()),
            static_cast<std::streamsize>(slice.values.size() * sizeof(std::complex<double>)));
  if (!out) throw ConfigError("snapshot: write failed for " + path.string());
}

FieldSlice read_raw(const fs::path& path, const LatticeShape& shape, int N) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("snapshot: cannot open " + path.string());
  FieldSlice slice = FieldSlice::zeros(shape, N);
  const std::streamsize bytes =
      static_cast<std::streamsize>(slice.values.size() * sizeof(std::complex<double>));
  in.read(reinterpret_cast<char*>(slice.values.data()), bytes);
  if (in.gcount() != bytes) {
    throw ConfigError("snapshot: " + path.string() + " holds " +
                      std::to_string(in.gcount()) + " bytes, expected " +
                      std::to_string(bytes));
  }
  return slice;
}

}  // namespace

std::string write_snapshot(const std::string& dir, const std::string& stem,
                           const SimState& state) {
  fs::create_directories(dir);
  const fs::path base(dir);
  const std::string prev_name = stem + "_prev.f64";
  const std::string curr_name = stem + "_curr.f64";
  write_raw(base / prev_name, state.prev);
  write_raw(base / curr_name, state.curr);

  nlohmann::json j;
  j["n"] = state.shape.n;
  j["dims"] = state.shape.dims;
  j["N"] = state.curr.N;
  j["epsilon"] = state.shape.epsilon;
  j["tau"] = state.tau;
  j["step_index"] = state.step_index;
  j["boundary"] = state.shape.boundary == Boundary::periodic ? "periodic" : "zero";
  j["prev_file"] = prev_name;
  j["curr_file"] = curr_name;

  const fs::path sidecar = base / (stem + ".json");
  std::ofstream out(sidecar, std::ios::trunc);
  if (!out) throw ConfigError("snapshot: cannot open " + sidecar.string());
  out << j.dump(2) << "\n";
  return sidecar.string();
}

SimState read_snapshot(const std::string& sidecar_path) {
  std::ifstream in(sidecar_path);
  if (!in) throw ConfigError("snapshot: cannot open sidecar " + sidecar_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("snapshot: malformed sidecar " + sidecar_path + ": " + e.what());
  }
  try {
    const std::string bstr = j.at("boundary").get<std::string>();
    if (bstr != "periodic" && bstr != "zero") {
      throw ConfigError("snapshot: unknown boundary '" + bstr + "'");
    }
    LatticeShape shape =
        make_shape(j.at("dims").get<std::vector<long>>(),
                   j.at("epsilon").get<double>(),
                   bstr == "periodic" ? Boundary::periodic : Boundary::zero);
    if (j.at("n").get<int>() != shape.n) {
      throw ConfigError("snapshot: sidecar n disagrees with dims length");
    }
    const int N = j.at("N").get<int>();
    const fs::path base = fs::path(sidecar_path).parent_path();

    SimState state;
    state.shape = shape;
    state.tau = j.at("tau").get<double>();
    state.step_index = j.at("step_index").get<long>();
    state.prev = read_raw(base / j.at("prev_file").get<std::string>(), shape, N);
    state.curr = read_raw(base / j.at("curr_file").get<std::string>(), shape, N);
    if (!(state.tau > 0.0)) throw ConfigError("snapshot: nonpositive tau");
    return state;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("snapshot: sidecar " + sidecar_path +
                      " missing or mistyped field: " + e.what());
  }
}

}  // namespace svwave
