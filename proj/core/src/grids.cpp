#include "fock/grids.hpp"

#include <cmath>

namespace fock {

PointGrid polar_grid(int n, double radius, int radial_count, int angular_count) {
  if (n < 1 || n > kMaxDim) throw ParameterError("polar_grid: bad dimension");
  if (radial_count < 2 || angular_count < 1 || !(radius > 0.0))
    throw ParameterError("polar_grid: need radial_count >= 2, angular_count >= 1, radius > 0");

  std::vector<Complex> plane{Complex(0.0, 0.0)};
  for (int i = 1; i < radial_count; ++i) {
    const double r = radius * i / (radial_count - 1);
    for (int j = 0; j < angular_count; ++j)
      plane.push_back(std::polar(r, 2.0 * kPi * j / angular_count));
  }

  PointGrid grid;
  grid.radius = radius * std::sqrt(static_cast<double>(n));
  std::size_t total = 1;
  for (int d = 0; d < n; ++d) total *= plane.size();
  grid.points.reserve(total);
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Point p(n);
    for (int d = 0; d < n; ++d) p[d] = plane[idx[static_cast<std::size_t>(d)]];
    grid.points.push_back(p);
    for (int d = n - 1; d >= 0; --d) {
      if (++idx[static_cast<std::size_t>(d)] < plane.size()) break;
      idx[static_cast<std::size_t>(d)] = 0;
    }
  }
  return grid;
}

PointGrid default_base_grid(const FockParam& param) {
  return polar_grid(param.n(), 6.0 * std::sqrt(param.t()), 80, 64);
}

PointGrid default_search_grid(const FockParam& param) {
  return polar_grid(param.n(), 6.0 * std::sqrt(param.t()), 200, 128);
}

double OffsetLattice::cell_volume() const { return std::pow(spacing, 2 * n); }

long OffsetLattice::index_of(const std::vector<int>& k) const {
  long flat = 0;
  for (int c : k) {
    if (c < -half_count || c > half_count) return -1;
    flat = flat * side() + (c + half_count);
  }
  return flat;
}

std::vector<int> OffsetLattice::coords_of(std::size_t flat) const {
  std::vector<int> k(static_cast<std::size_t>(2 * n));
  for (int d = 2 * n - 1; d >= 0; --d) {
    k[static_cast<std::size_t>(d)] = static_cast<int>(flat % static_cast<std::size_t>(side())) - half_count;
    flat /= static_cast<std::size_t>(side());
  }
  return k;
}

OffsetLattice offset_lattice(int n, double spacing, int half_count) {
  if (n < 1 || n > kMaxDim) throw ParameterError("offset_lattice: bad dimension");
  if (!(spacing > 0.0) || half_count < 0)
    throw ParameterError("offset_lattice: need spacing > 0 and half_count >= 0");
  OffsetLattice lat;
  lat.n = n;
  lat.spacing = spacing;
  lat.half_count = half_count;
  std::size_t total = 1;
  for (int d = 0; d < 2 * n; ++d) total *= static_cast<std::size_t>(lat.side());
  lat.points.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    const auto k = lat.coords_of(flat);
    Point p(n);
    for (int j = 0; j < n; ++j)
      p[j] = Complex(spacing * k[static_cast<std::size_t>(2 * j)],
                     spacing * k[static_cast<std::size_t>(2 * j + 1)]);
    lat.points.push_back(p);
  }
  return lat;
}

OffsetLattice default_offset_lattice(const FockParam& param) {
  // Coarser in higher dimension: the lattice has side^{2n} points.
  const double r = std::sqrt(param.t());
  switch (param.n()) {
    case 1: return offset_lattice(1, 0.25 * r, 48);
    case 2: return offset_lattice(2, 0.75 * r, 11);
    default: return offset_lattice(param.n(), 1.5 * r, 5);
  }
}

std::vector<Point> direction_grid(int n, int count) {
  if (count < 1) throw ParameterError("direction_grid: count must be positive");
  std::vector<Point> dirs;
  if (n == 1) {
    for (int j = 0; j < count; ++j) dirs.push_back(make_point({std::polar(1.0, 2.0 * kPi * j / count)}));
    return dirs;
  }
  if (n == 2) {
    const int side = std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(count)))));
    for (int i = 0; i < side; ++i) {
      const double a = (i + 0.5) * (kPi / 2.0) / side;
      for (int j = 0; j < side; ++j) {
        const double phi = 2.0 * kPi * j / side;
        dirs.push_back(make_point({std::polar(std::cos(a), phi), std::polar(std::sin(a), -phi)}));
      }
    }
    return dirs;
  }
  if (n == 3) {
    // Fibonacci spiral on S^2 for the moduli, golden-angle phases.
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int j = 0; j < count; ++j) {
      const double zc = 1.0 - 2.0 * (j + 0.5) / count;
      const double rho = std::sqrt(std::max(0.0, 1.0 - zc * zc));
      const double phi = golden * j;
      const Eigen::Vector3d m(std::abs(rho * std::cos(phi)), std::abs(rho * std::sin(phi)), std::abs(zc));
      const Eigen::Vector3d u = m.normalized();
      dirs.push_back(make_point({std::polar(u[0], phi), std::polar(u[1], 2.0 * phi),
                                 std::polar(u[2], 3.0 * phi)}));
    }
    return dirs;
  }
  throw ParameterError("direction_grid: bad dimension");
}

}  // namespace fock
