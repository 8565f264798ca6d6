#include "svwave/lattice.hpp"

#include <cmath>

#include "svwave/numeric.hpp"

namespace svwave {

double LatticeShape::cell_measure() const {
  double m = 1.0;
  for (int j = 0; j < n; ++j) m *= epsilon;
  return m;
}

LatticeShape make_shape(std::vector<long> dims, double epsilon, Boundary boundary) {
  if (dims.empty() || dims.size() > 3) {
    throw ConfigError("lattice: dimension count must be 1..3, got " +
                      std::to_string(dims.size()));
  }
  for (long d : dims) {
    if (d < 3) {
      throw ConfigError(
          "lattice: each axis needs at least 3 sites for distinct stencil "
          "neighbors, got " + std::to_string(d));
    }
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("lattice: epsilon must be positive and finite");
  }
  LatticeShape s;
  s.n = static_cast<int>(dims.size());
  s.dims = std::move(dims);
  s.epsilon = epsilon;
  s.boundary = boundary;
  return s;
}

FieldSlice FieldSlice::zeros(const LatticeShape& shape, int N) {
  if (N < 1) throw ConfigError("field: component count N must be >= 1");
  FieldSlice f;
  f.N = N;
  f.values.assign(static_cast<std::size_t>(N) *
                      static_cast<std::size_t>(shape.sites()),
                  {0.0, 0.0});
  return f;
}

long neighbor(const LatticeShape& shape, long site, int axis, int dir) {
  // row-major, last axis fastest: stride of axis j is the product of the
  // faster dims
  long stride = 1;
  for (int k = shape.n - 1; k > axis; --k) stride *= shape.dims[k];
  const long L = shape.dims[axis];
  const long coord = (site / stride) % L;
  long next = coord + dir;
  if (next < 0 || next >= L) {
    if (shape.boundary == Boundary::zero) return -1;
    next -= dir * L;  // wrap
  }
  return site + (next - coord) * stride;
}

FieldSlice laplacian(const FieldSlice& slice, const LatticeShape& shape) {
  if (!slice.conforms(shape)) {
    throw ConfigError("laplacian: slice does not conform to the lattice shape");
  }
  const long sites = shape.sites();
  const int N = slice.N;
  const double inv_eps2 = 1.0 / (shape.epsilon * shape.epsilon);
  FieldSlice out = FieldSlice::zeros(shape, N);
  for (long X = 0; X < sites; ++X) {
    for (int j = 0; j < shape.n; ++j) {
      const long up = neighbor(shape, X, j, +1);
      const long dn = neighbor(shape, X, j, -1);
      for (int c = 0; c < N; ++c) {
        std::complex<double> acc = -2.0 * slice.values[X * N + c];
        if (up >= 0) acc += slice.values[up * N + c];
        if (dn >= 0) acc += slice.values[dn * N + c];
        out.values[X * N + c] += acc * inv_eps2;
      }
    }
  }
  return out;
}

double l2_norm_sq(const FieldSlice& slice, const LatticeShape& shape) {
  if (!slice.conforms(shape)) {
    throw ConfigError("l2_norm_sq: slice does not conform to the lattice shape");
  }
  std::vector<double> sq(slice.values.size());
  for (std::size_t i = 0; i < slice.values.size(); ++i) {
    sq[i] = std::norm(slice.values[i]);
  }
  return pairwise_sum(sq) * shape.cell_measure();
}

bool all_finite(const FieldSlice& slice) {
  for (const auto& v : slice.values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

}  // namespace svwave
