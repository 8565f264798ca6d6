#include "doctest.h"

#include <cmath>
#include <complex>
#include <filesystem>

#include "svwave/lattice.hpp"
#include "svwave/numeric.hpp"
#include "svwave/snapshot.hpp"

using svwave::Boundary;
using svwave::FieldSlice;
using svwave::LatticeShape;
using svwave::SplitMix64;

namespace {

FieldSlice random_slice(const LatticeShape& shape, int N, std::uint64_t seed) {
  FieldSlice f = FieldSlice::zeros(shape, N);
  SplitMix64 rng(seed);
  for (auto& v : f.values) v = {rng.normal(), rng.normal()};
  return f;
}

}  // namespace

TEST_CASE("shape validation") {
  CHECK_NOTHROW(svwave::make_shape({8}, 0.5, Boundary::periodic));
  CHECK_NOTHROW(svwave::make_shape({3, 4, 5}, 1.0, Boundary::zero));
  CHECK_THROWS_AS(svwave::make_shape({2}, 1.0, Boundary::periodic), svwave::ConfigError);
  CHECK_THROWS_AS(svwave::make_shape({}, 1.0, Boundary::periodic), svwave::ConfigError);
  CHECK_THROWS_AS(svwave::make_shape({4, 4, 4, 4}, 1.0, Boundary::periodic),
                  svwave::ConfigError);
  CHECK_THROWS_AS(svwave::make_shape({8}, 0.0, Boundary::periodic), svwave::ConfigError);
  CHECK_THROWS_AS(svwave::make_shape({8}, -1.0, Boundary::periodic), svwave::ConfigError);

  auto s = svwave::make_shape({4, 6}, 0.5, Boundary::periodic);
  CHECK(s.sites() == 24);
  CHECK(s.cell_measure() == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("neighbor round-trip on a 3-D lattice") {
  auto shape = svwave::make_shape({3, 4, 5}, 1.0, Boundary::periodic);
  for (long X = 0; X < shape.sites(); ++X) {
    for (int j = 0; j < 3; ++j) {
      const long up = svwave::neighbor(shape, X, j, +1);
      const long dn = svwave::neighbor(shape, X, j, -1);
      CHECK(svwave::neighbor(shape, up, j, -1) == X);
      CHECK(svwave::neighbor(shape, dn, j, +1) == X);
    }
  }
}

TEST_CASE("laplacian of a unit impulse (1-D, eps = 1)") {
  auto shape = svwave::make_shape({8}, 1.0, Boundary::periodic);
  FieldSlice f = FieldSlice::zeros(shape, 1);
  f.values[3] = 1.0;
  auto lap = svwave::laplacian(f, shape);
  for (long X = 0; X < 8; ++X) {
    const double want = (X == 3) ? -2.0 : (X == 2 || X == 4) ? 1.0 : 0.0;
    CHECK(lap.values[X].real() == doctest::Approx(want).epsilon(1e-15));
    CHECK(lap.values[X].imag() == 0.0);
  }
}

TEST_CASE("laplacian of a constant field is exactly zero (periodic)") {
  for (auto dims : {std::vector<long>{7}, {5, 6}, {3, 4, 5}}) {
    auto shape = svwave::make_shape(dims, 0.3, Boundary::periodic);
    FieldSlice f = FieldSlice::zeros(shape, 2);
    for (auto& v : f.values) v = {1.7, -0.4};
    auto lap = svwave::laplacian(f, shape);
    for (const auto& v : lap.values) {
      CHECK(v.real() == 0.0);
      CHECK(v.imag() == 0.0);
    }
  }
}

TEST_CASE("plane wave is an eigenvector of the periodic laplacian") {
  auto shape = svwave::make_shape({8, 6}, 0.7, Boundary::periodic);
  const long k1 = 3, k2 = 2;  // reciprocal-grid modes
  const double two_pi = 6.283185307179586476925287;
  FieldSlice f = FieldSlice::zeros(shape, 1);
  for (long x = 0; x < 8; ++x) {
    for (long y = 0; y < 6; ++y) {
      const double phase = two_pi * (static_cast<double>(k1 * x) / 8.0 +
                                     static_cast<double>(k2 * y) / 6.0);
      f.values[x * 6 + y] = std::polar(1.0, phase);
    }
  }
  const double eps2 = shape.epsilon * shape.epsilon;
  const double eig = -((2.0 - 2.0 * std::cos(two_pi * k1 / 8.0)) +
                       (2.0 - 2.0 * std::cos(two_pi * k2 / 6.0))) /
                     eps2;
  auto lap = svwave::laplacian(f, shape);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const auto want = eig * f.values[i];
    CHECK(std::abs(lap.values[i] - want) <= 1e-12 * std::abs(eig));
  }
}

TEST_CASE("zero boundary treats missing neighbors as vacuum") {
  auto shape = svwave::make_shape({5}, 1.0, Boundary::zero);
  FieldSlice f = FieldSlice::zeros(shape, 1);
  for (long X = 0; X < 5; ++X) f.values[X] = 1.0;
  auto lap = svwave::laplacian(f, shape);
  // interior: 1 - 2 + 1 = 0; edges lose one neighbor: 0 - 2 + 1 = -1
  CHECK(lap.values[0].real() == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(lap.values[4].real() == doctest::Approx(-1.0).epsilon(1e-15));
  for (long X = 1; X < 4; ++X) CHECK(lap.values[X].real() == 0.0);
}

TEST_CASE("periodic laplacian telescopes to zero total") {
  auto shape = svwave::make_shape({6, 5}, 0.4, Boundary::periodic);
  FieldSlice f = random_slice(shape, 2, 42u);
  auto lap = svwave::laplacian(f, shape);
  std::complex<double> total = 0.0;
  double scale = 0.0;
  for (const auto& v : lap.values) {
    total += v;
    scale += std::abs(v);
  }
  CHECK(std::abs(total) <= 1e-12 * scale);
}

TEST_CASE("l2 norm: examples and pairwise vs naive oracle") {
  auto shape = svwave::make_shape({10}, 0.5, Boundary::periodic);
  FieldSlice z = FieldSlice::zeros(shape, 1);
  CHECK(svwave::l2_norm_sq(z, shape) == 0.0);

  FieldSlice one = FieldSlice::zeros(shape, 1);
  one.values[4] = {1.2, 1.6};  // |psi| = 2
  CHECK(svwave::l2_norm_sq(one, shape) == doctest::Approx(2.0).epsilon(1e-15));

  auto shape2 = svwave::make_shape({9, 7}, 0.73, Boundary::periodic);
  FieldSlice r = random_slice(shape2, 3, 7u);
  double naive = 0.0;
  for (const auto& v : r.values) naive += std::norm(v);
  naive *= shape2.cell_measure();
  CHECK(svwave::l2_norm_sq(r, shape2) == doctest::Approx(naive).epsilon(1e-13));
}

TEST_CASE("laplacian rejects nonconforming slices") {
  auto shape = svwave::make_shape({8}, 1.0, Boundary::periodic);
  FieldSlice f = FieldSlice::zeros(shape, 1);
  f.values.pop_back();
  CHECK_THROWS_AS(svwave::laplacian(f, shape), svwave::ConfigError);
  CHECK_THROWS_AS(svwave::l2_norm_sq(f, shape), svwave::ConfigError);
}

TEST_CASE("snapshot round-trip is bitwise exact") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "svwave_snapshot_test";
  fs::remove_all(dir);

  svwave::SimState state;
  state.shape = svwave::make_shape({4, 5}, 0.31, Boundary::zero);
  state.prev = random_slice(state.shape, 2, 1u);
  state.curr = random_slice(state.shape, 2, 2u);
  state.step_index = 17;
  state.tau = 0.123456789012345678;

  const std::string sidecar = svwave::write_snapshot(dir.string(), "t17", state);
  auto back = svwave::read_snapshot(sidecar);

  CHECK(back.shape == state.shape);
  CHECK(back.step_index == 17);
  CHECK(back.tau == state.tau);
  REQUIRE(back.prev.values.size() == state.prev.values.size());
  REQUIRE(back.curr.values.size() == state.curr.values.size());
  for (std::size_t i = 0; i < state.prev.values.size(); ++i) {
    CHECK(back.prev.values[i] == state.prev.values[i]);
    CHECK(back.curr.values[i] == state.curr.values[i]);
  }
  CHECK_THROWS_AS(svwave::read_snapshot((dir / "absent.json").string()),
                  svwave::ConfigError);
  fs::remove_all(dir);
}
