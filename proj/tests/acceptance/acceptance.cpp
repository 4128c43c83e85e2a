// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "fock/catalog.hpp"
#include "fock/fock_space.hpp"
#include "fock/grids.hpp"
#include "fock/operators.hpp"
#include "fock/spectral.hpp"
#include "fock/wiener.hpp"

using namespace fock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double spectral_norm(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

Point random_disc_point(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return make_point({std::polar(radius * std::sqrt(u(rng)), 2.0 * kPi * u(rng))});
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

Outcome reproducing() {
  std::mt19937_64 rng(101);
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<int> deg(0, 8);
  const double ts[] = {0.5, 1.0, 2.0};
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double t = ts[trial % 3];
    const FockParam p(t, 1);
    const QuadratureRule rule = build_polar_rule(p);
    std::vector<Complex> c(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& x : c) x = Complex(nd(rng), nd(rng));
    auto f = [&](const Point& w) {
      Complex s = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * w[0] + *it;
      return s;
    };
    const Point z = random_disc_point(rng, 3.0);
    worst = std::max(worst, std::abs(bergman_project(f, z, p, rule) - f(z)));
  }
  return {worst < 1e-10, "max |P_t f - f| = " + fmt(worst) + " (tol 1e-10)"};
}

Outcome kernel_norms() {
  std::mt19937_64 rng(202);
  double worst = 0.0;
  const FockParam p(1.0, 1);
  const QuadratureRule rule = build_polar_rule(p);
  const PointGrid grid = default_search_grid(p);
  for (int trial = 0; trial < 20; ++trial) {
    const Point z = random_disc_point(rng, 3.0);
    auto kz = [&](const Point& w) { return kernel_k_normalized(z, w, p); };
    for (double q : {1.0, 2.0, 3.0}) worst = std::max(worst, std::abs(fock_norm_p(kz, q, p, rule) - 1.0));
    worst = std::max(worst, std::abs(fock_norm_infty(kz, p, grid) - 1.0));
  }
  return {worst < 1e-8, "max | ||k_z||_p - 1 | = " + fmt(worst) + " over p in {1,2,3,inf} (tol 1e-8)"};
}

Outcome weyl_algebra() {
  std::mt19937_64 rng(303);
  const FockParam p(1.0, 1);
  const int d = 25;
  const BasisSpec big(p, d + 45);
  const int k = big.section_size(d);
  double comp = 0.0, iso = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const Point z = random_disc_point(rng, 1.0), w = random_disc_point(rng, 1.0);
    const ComplexMatrix wz = weyl_matrix(z, big).entries, ww = weyl_matrix(w, big).entries;
    const ComplexMatrix wzw = weyl_matrix(Point(z + w), big).entries;
    const Complex phase = std::polar(1.0, -(z[0] * std::conj(w[0])).imag() / p.t());
    comp = std::max(comp, spectral_norm((wz * ww).topLeftCorner(k, k) - phase * wzw.topLeftCorner(k, k)));
    iso = std::max(iso, spectral_norm((wz.adjoint() * wz).topLeftCorner(k, k) - ComplexMatrix::Identity(k, k)));
  }
  return {comp < 1e-8 && iso < 1e-8, "composition residual " + fmt(comp) + ", isometry defect " + fmt(iso) + " (tol 1e-8)"};
}

Outcome berezin_identity() {
  const FockParam p(1.0, 1);
  const QuadratureRule rule = build_polar_rule(p, 60, 121);
  std::vector<Point> pts;
  for (int i = 0; i < 10; ++i) pts.push_back(make_point({std::polar(0.15 * (i + 1), 0.7 * i)}));
  double worst = 0.0;
  for (const char* name : {"gauss1", "phase", "identity"}) {
    const auto e = catalog_entry(p, name);
    const SymbolFunction f = e.symbol ? *e.symbol : constant_symbol(1.0);
    for (const Point& w : pts)
      for (const Point& z : pts)
        worst = std::max(worst, std::abs(berezin_toeplitz_quadrature(f, w, z, rule) - berezin_bivariate(e.kernel, w, z)));
  }
  return {worst < 1e-8, "max error " + fmt(worst) + " on a 10x10 grid for gauss1, phase, identity (tol 1e-8)"};
}

Outcome bound_chain() {
  const FockParam p(1.0, 1);
  const OffsetLattice lat = default_offset_lattice(p);
  const QuadratureRule schur_rule = default_schur_rule(p);
  Outcome out;
  std::ostringstream os;
  for (const auto& e : operator_catalog(p)) {
    const bool series = e.kernel.provenance() == KernelProvenance::Series;
    const PointGrid base = series ? polar_grid(1, 6.0, 25, 24) : default_base_grid(p);
    const double wb = wiener_norm_bound(dominating_profile(e.kernel, base, lat));
    const SchurBounds sb = schur_bounds(e.kernel, schur_rule, base);
    const double s2 = operator_norm_bound_p(sb.a1, sb.ainf, 2.0, p);
    const double tn = spectral_norm(e.matrix(BasisSpec(p, 30)).entries);
    const bool ok = tn <= s2 * (1.0 + 1e-9) && s2 <= wb * (1.0 + 1e-9);
    out.pass = out.pass && ok;
    os << e.name << " " << fmt(tn) << "<=" << fmt(s2) << "<=" << fmt(wb) << (ok ? "" : " VIOLATED") << "; ";
    if (e.name == "identity") {
      const bool id_ok = std::abs(wb - 2.0) < 1e-6 && std::abs(tn - 1.0) < 1e-12;
      out.pass = out.pass && id_ok;
      os << "identity wiener-2 = " << fmt(wb - 2.0) << ", norm " << tn << "; ";
    }
  }
  out.detail = os.str();
  return out;
}

Outcome submultiplicativity() {
  const FockParam p(1.0, 1);
  const auto cat = operator_catalog(p);
  const PointGrid base = polar_grid(1, 4.0, 13, 16);
  const OffsetLattice lat = offset_lattice(1, 0.5, 24);
  const QuadratureRule rule = build_polar_rule(p);
  std::vector<DominatingProfile> profiles;
  for (const auto& e : cat) profiles.push_back(dominating_profile(e.kernel, base, lat));
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<std::size_t> pick(0, cat.size() - 1);
  double prod_err = 0.0, excess = -INFINITY;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t i = pick(rng), j = pick(rng);
    const DominatingProfile conv = convolution_bound(profiles[i], profiles[j]);
    double sum = 0.0;
    for (double v : conv.values) sum += v;
    const double from_values = p.normalizer() * lat.cell_volume() * sum;
    const double target = profiles[i].l1_estimate * profiles[j].l1_estimate;
    prod_err = std::max(prod_err, std::abs(from_values - target) / target);
    const DominatingProfile direct = dominating_profile(compose_kernels(cat[i].kernel, cat[j].kernel, rule), base, lat);
    for (std::size_t u = 0; u < conv.values.size(); ++u) excess = std::max(excess, direct.values[u] - conv.values[u]);
  }
  return {prod_err < 1e-10 && excess <= 1e-8,
          "relative product error " + fmt(prod_err) + " (tol 1e-10), max pointwise excess " + fmt(excess) + " (tol 1e-8)"};
}

Outcome compactness() {
  const FockParam p(1.0, 1);
  std::vector<double> radii;
  for (int i = 0; i <= 20; ++i) radii.push_back(0.5 * i);
  const auto gauss = catalog_entry(p, "gauss1");
  const bool g = compactness_test(gauss.kernel, radii).verdict;
  const bool id = compactness_test(identity_kernel(p), radii).verdict;
  const bool ph = compactness_test(phase_kernel(p), radii).verdict;
  const auto rep = truncated_spectrum(gauss.matrix(BasisSpec(p, 30)), {30});
  std::vector<Complex> ev = rep.eigenvalues[0];
  double err = 0.0;
  // ascending order: 2^{-31}, ..., 2^{-1}
  for (std::size_t m = 0; m < ev.size(); ++m) err = std::max(err, std::abs(ev[ev.size() - 1 - m] - std::pow(2.0, -(m + 1.0))));
  const bool ok = g && !id && !ph && err < 1e-9;
  return {ok, std::string("gauss ") + (g ? "true" : "false") + ", identity " + (id ? "true" : "false") + ", phase " +
                  (ph ? "true" : "false") + ", eigenvalue error " + fmt(err) + " (tol 1e-9)"};
}

Outcome essential_spectrum() {
  const FockParam p(1.0, 1);
  const auto ess = essential_spectrum_estimate(phase_symbol(), direction_grid(1, 64), BasisSpec(p, 40));
  std::vector<Complex> circle;
  for (int j = 0; j < 100000; ++j) circle.push_back(std::polar(1.0, 2.0 * kPi * j / 100000));
  const double h = hausdorff_distance(ess, circle);
  return {h < 0.05, "Hausdorff distance to the unit circle " + fmt(h) + " (tol 0.05)"};
}

Outcome fredholm() {
  const FockParam p(1.0, 1);
  const auto e = catalog_entry(p, "phase");
  const TruncatedOperator a = e.matrix(BasisSpec(p, 60));
  IndexOptions opt;
  opt.kernel = e.kernel;
  const IndexResult r0 = fredholm_index(a, 0.0, {30, 35, 40}, opt);
  const IndexResult r2 = fredholm_index(a, 2.0, {30, 35, 40}, opt);
  double smin = INFINITY;
  for (double s : r2.diagnostics.singular_min) smin = std::min(smin, s);
  const int winding = r0.diagnostics.winding.value_or(0);
  const bool ok = r0.index == -1 && winding == -r0.index && r2.index == 0 && smin > 0.5;
  return {ok, "index(0) = " + std::to_string(r0.index) + ", winding = " + std::to_string(winding) +
                  ", index(2) = " + std::to_string(r2.index) + ", min singular value at 2 = " + fmt(smin) + " (> 0.5)"};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome cli_determinism() {
  const std::vector<std::string> examples = {
      "spectrum --symbol \"exp(-abs(z)^2)\" --t 1 --degree 30",
      "norm-bounds --symbol \"1\" --t 1",
      "index --symbol \"phase(z)\" --lambda 0 --t 1",
      "toeplitz --symbol \"phase(z)\" --degree 8",
      "berezin --symbol \"exp(-abs(z)^2) + phase(z)\" --steps 9",
      "ess-spectrum --symbol \"phase(z)\" --directions 16 --degree 10",
      "compactness --symbol \"exp(-abs(z)^2)\"",
      "compose --symbol \"exp(-abs(z)^2)\" --symbol2 \"exp(-0.5*abs(z)^2)\"",
  };
  const auto dir = std::filesystem::temp_directory_path() / "fock_acceptance";
  std::filesystem::create_directories(dir);
  Outcome out;
  int identical = 0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    std::string files[2];
    for (int run = 0; run < 2; ++run) {
      const auto path = dir / ("example" + std::to_string(i) + "_" + std::to_string(run) + ".json");
      std::filesystem::remove(path);
      const std::string cmd = std::string("\"") + FOCK_CLI_PATH + "\" " + examples[i] + " --out \"" + path.string() + "\"";
      if (std::system(cmd.c_str()) != 0) {
        out.pass = false;
        out.detail += "failed: " + examples[i] + "; ";
      }
      files[run] = slurp(path);
    }
    if (!files[0].empty() && files[0] == files[1])
      ++identical;
    else
      out.pass = false;
  }
  std::filesystem::remove_all(dir);
  out.detail += std::to_string(identical) + "/" + std::to_string(examples.size()) + " example commands byte-identical";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"reproducing property", reproducing},
      {"normalized kernel norms", kernel_norms},
      {"Weyl algebra", weyl_algebra},
      {"Berezin identity", berezin_identity},
      {"bound chain", bound_chain},
      {"submultiplicativity", submultiplicativity},
      {"compactness", compactness},
      {"essential spectrum", essential_spectrum},
      {"Fredholm index", fredholm},
      {"CLI determinism", cli_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("criterion %zu: %s  %s: %s [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
