#ifndef SVWAVE_LATTICE_HPP
#define SVWAVE_LATTICE_HPP

#include <complex>
#include <string>
#include <vector>

namespace svwave {

enum class Boundary { periodic, zero };

/// Finite n-dimensional lattice, n in {1,2,3}. Sites are stored row-major
/// with the LAST axis fastest; field components are interleaved per site.
/// Periodic wraparound keeps every telescoping identity of the conservation
/// proofs exact on the truncation; the zero boundary treats missing
/// neighbors as vacuum and is intended for localized pulses only.
struct LatticeShape {
  int n = 1;
  std::vector<long> dims;  // L_1..L_n, each >= 3
  double epsilon = 1.0;
  Boundary boundary = Boundary::periodic;

  long sites() const {
    long s = 1;
    for (long d : dims) s *= d;
    return s;
  }
  /// epsilon^n, the site measure weight
  double cell_measure() const;
  bool operator==(const LatticeShape&) const = default;
};

/// Validates and normalizes a shape; throws ConfigError on violation.
LatticeShape make_shape(std::vector<long> dims, double epsilon, Boundary boundary);

/// One time slice of the field: complex N-vector per site.
struct FieldSlice {
  int N = 1;
  std::vector<std::complex<double>> values;  // size N * sites, row-major sites

  static FieldSlice zeros(const LatticeShape& shape, int N);
  bool conforms(const LatticeShape& shape) const {
    return N >= 1 && values.size() == static_cast<std::size_t>(N) *
                                          static_cast<std::size_t>(shape.sites());
  }
};

/// Pair of adjacent time slices plus mesh data; curr is the slice at
/// step_index, prev the one before it.
struct SimState {
  FieldSlice prev;
  FieldSlice curr;
  long step_index = 1;
  double tau = 0.0;
  LatticeShape shape;
};

/// Index of the neighbor of `site` one step along `axis` (0-based) in
/// direction dir = +1 or -1. Returns -1 for a missing neighbor under the
/// zero boundary; wraps under the periodic boundary.
long neighbor(const LatticeShape& shape, long site, int axis, int dir);

/// Discrete Laplacian: per site and component,
/// sum_j (psi_{X+e_j} - 2 psi_X + psi_{X-e_j}) / epsilon^2.
FieldSlice laplacian(const FieldSlice& slice, const LatticeShape& shape);

/// sum_X |psi_X|^2 epsilon^n with deterministic pairwise-tree summation.
double l2_norm_sq(const FieldSlice& slice, const LatticeShape& shape);

/// True when every entry of the slice is finite.
bool all_finite(const FieldSlice& slice);

}  // namespace svwave

#endif
