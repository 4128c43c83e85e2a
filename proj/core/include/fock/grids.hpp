#pragma once

#include <vector>

#include "fock/types.hpp"

namespace fock {

/// Finite point set used for suprema (base grids, norm search grids).
struct PointGrid {
  std::vector<Point> points;
  /// Largest |z| covered.
  double radius = 0.0;

  std::size_t size() const { return points.size(); }
};

/// Tensor product over coordinates of the planar polar grid
/// { r_i e^{i theta_j} : r_i = radius i / (radial_count - 1), theta_j = 2 pi j / angular_count },
/// with the origin listed once per coordinate.
PointGrid polar_grid(int n, double radius, int radial_count, int angular_count);

/// Base grid for fiber suprema: |z| <= 6 sqrt(t), 80 x 64 per coordinate.
PointGrid default_base_grid(const FockParam& param);

/// Search grid for the F^infty norm: |z| <= 6 sqrt(t), 200 x 128.
PointGrid default_search_grid(const FockParam& param);

/// Square lattice h Z^{2n} restricted to |Re u_j|, |Im u_j| <= half_count h.
/// Lattice points are stored in row-major order over the 2n real coordinates
/// (Re u_1, Im u_1, Re u_2, ...), so convolutions can index them directly.
struct OffsetLattice {
  int n = 1;
  double spacing = 0.0;
  int half_count = 0;
  std::vector<Point> points;

  int side() const { return 2 * half_count + 1; }
  /// Lebesgue volume h^{2n} of one cell.
  double cell_volume() const;
  /// Largest |u_j| component covered: half_count * spacing.
  double half_width() const { return half_count * spacing; }
  /// Flat index of integer coordinates k in [-half_count, half_count]^{2n};
  /// -1 if outside.
  long index_of(const std::vector<int>& k) const;
  /// Integer coordinates of a flat index.
  std::vector<int> coords_of(std::size_t flat) const;

  bool operator==(const OffsetLattice& o) const {
    return n == o.n && spacing == o.spacing && half_count == o.half_count;
  }
};

OffsetLattice offset_lattice(int n, double spacing, int half_count);

/// n = 1: spacing 0.25 sqrt(t), half-width 12 sqrt(t). n = 2: 0.75 sqrt(t) and
/// 8.25 sqrt(t). n = 3: 1.5 sqrt(t) and 7.5 sqrt(t).
OffsetLattice default_offset_lattice(const FockParam& param);

/// Unit directions in C^n. n = 1: count equally spaced angles. n = 2: an
/// 8 x 8 (or sqrt(count) x sqrt(count)) grid over the Hopf angles
/// (cos a e^{i phi}, sin a e^{-i phi}). n = 3: a deterministic spiral sample.
std::vector<Point> direction_grid(int n, int count = 64);

}  // namespace fock
