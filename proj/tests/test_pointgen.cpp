#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "torushu/pointgen.hpp"
#include "torushu/variance.hpp"

using namespace torushu;

namespace {

Lattice z2() { return lattice_from_basis(2, {1, 0, 0, 1}); }
Lattice z3() { return lattice_from_basis(3, {1, 0, 0, 0, 1, 0, 0, 0, 1}); }

DualVector dual_of(const Lattice& L, std::vector<int> idx) {
  for (const DualVector& w : enumerate_dual(L, 20.0))
    if (w.index == idx) return w;
  throw std::runtime_error("index not found");
}

}  // namespace

TEST_CASE("gen_uniform basics") {
  Lattice L = z2();
  CHECK_THROWS_AS(gen_uniform(L, 0, {1, 0}), std::invalid_argument);
  PointSet a = gen_uniform(L, 100, {5, 3});
  PointSet b = gen_uniform(L, 100, {5, 3});
  PointSet c = gen_uniform(L, 100, {5, 4});
  CHECK(a.n == 100);
  CHECK(a.coords == b.coords);
  CHECK(a.coords != c.coords);
  CHECK(a.provenance.generator == "uniform");
  for (double v : a.coords) {
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
  // CLT bound on the coordinate mean at N = 1e5
  PointSet big = gen_uniform(L, 100000, {11, 0});
  for (int i = 0; i < 2; ++i) {
    double mean = 0;
    for (std::size_t j = 0; j < big.n; ++j) mean += big.frac(i, j);
    mean /= static_cast<double>(big.n);
    CHECK(std::abs(mean - 0.5) <= 3.0 / std::sqrt(12.0 * 100000.0));
  }
}

TEST_CASE("partition geometry") {
  Partition p = make_partition(z2(), 2);
  CHECK(p.cell_count() == 4);
  CHECK(p.cell_diameter_bound() == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-14));
  CHECK(make_partition(z3(), 1).cell_count() == 1);
  Lattice hex = normalize_lattice(2, {1, 0.5, 0, std::sqrt(3.0) / 2});
  Partition ph = make_partition(hex, 3);
  CHECK(ph.cell_count() == 9);
  double maxcol = 0;
  for (int j = 0; j < 2; ++j) {
    double n2 = 0;
    for (int i = 0; i < 2; ++i) n2 += hex.entry(i, j) * hex.entry(i, j);
    maxcol = std::max(maxcol, std::sqrt(n2));
  }
  CHECK(ph.cell_diameter_bound() <= std::sqrt(2.0) * maxcol / 3 + 1e-14);
  CHECK_THROWS_AS(make_partition(z2(), 0), std::invalid_argument);
  CHECK_THROWS_AS(make_partition(z3(), 10000), enumeration_cap_error);
}

TEST_CASE("gen_jittered cell containment") {
  Partition p = make_partition(z2(), 4);
  for (std::uint64_t rep = 0; rep < 50; ++rep) {
    PointSet X = gen_jittered(p, {3, rep});
    CHECK(X.n == 16);
    for (std::size_t k = 0; k < X.n; ++k) {
      auto lo = p.cell_origin(k);
      for (int i = 0; i < 2; ++i) {
        CHECK(X.frac(i, k) >= lo[i]);
        CHECK(X.frac(i, k) < lo[i] + 0.25);
      }
    }
  }
}

TEST_CASE("gen_sublattice grid and aliasing") {
  PointSet g = gen_sublattice(z2(), 2);
  CHECK(g.n == 4);
  std::vector<std::pair<double, double>> pts;
  for (std::size_t j = 0; j < 4; ++j) pts.push_back({g.frac(0, j), g.frac(1, j)});
  std::sort(pts.begin(), pts.end());
  CHECK(pts == std::vector<std::pair<double, double>>{{0, 0}, {0, 0.5}, {0.5, 0}, {0.5, 0.5}});

  PointSet g3 = gen_sublattice(z2(), 3);
  for (auto idx : {std::vector<int>{1, 0}, {0, 1}, {2, 1}, {-1, 2}, {1, 1}})
    CHECK(weyl_sum_sq(g3, dual_of(z2(), idx)) < 1e-20);
  CHECK(weyl_sum_sq(g3, dual_of(z2(), {3, 0})) == doctest::Approx(81.0).epsilon(1e-12));
  CHECK(gen_sublattice(z3(), 1).n == 1);
}

TEST_CASE("choose_spectrum prefix and tie-break") {
  Lattice L = z2();
  SpectrumSelection s3 = choose_spectrum(L, 3);
  CHECK(s3.vectors[0].index == std::vector<int>{0, 0});
  CHECK(s3.vectors[1].index == std::vector<int>{-1, 0});
  CHECK(s3.vectors[2].index == std::vector<int>{0, -1});
  SpectrumSelection s5 = choose_spectrum(L, 5);
  for (std::size_t i = 0; i < 3; ++i) CHECK(s5.vectors[i].index == s3.vectors[i].index);
  for (std::size_t i = 1; i < 5; ++i) CHECK(s5.vectors[i].norm == doctest::Approx(1.0));
  SpectrumSelection s7 = choose_spectrum(z3(), 7);
  CHECK(s7.vectors[0].norm == 0.0);
  for (std::size_t i = 1; i < 7; ++i) CHECK(s7.vectors[i].norm == doctest::Approx(1.0));
}

TEST_CASE("dpp kernel values") {
  SpectrumSelection S = choose_spectrum(z2(), 5);
  TorusPoint x{{0.3, 0.4}};
  CHECK(dpp_kernel_eval(S, x, x).real() == doctest::Approx(5.0).epsilon(1e-13));
  CHECK(std::abs(dpp_kernel_eval(S, x, x).imag()) < 1e-12);
  TorusPoint y{{0.8, 0.9}};  // x - y = (-0.5, -0.5)
  CHECK(dpp_kernel_eval(S, x, y).real() == doctest::Approx(-3.0).epsilon(1e-12));
  RngStream rng({15, 0});
  for (int i = 0; i < 100; ++i) {
    TorusPoint a{{rng.next_double(), rng.next_double()}};
    TorusPoint b{{rng.next_double(), rng.next_double()}};
    CHECK(std::abs(dpp_kernel_eval(S, a, b)) <= 5.0 + 1e-10);
  }
}

TEST_CASE("gen_dpp statistics") {
  Lattice L = z2();
  SpectrumSelection S = choose_spectrum(L, 5);
  PointSet first = gen_dpp(S, {21, 4});
  CHECK(first.n == 5);
  CHECK(first.coords == gen_dpp(S, {21, 4}).coords);

  // single-mode process is a uniform point
  PointSet one = gen_dpp(choose_spectrum(L, 1), {2, 0});
  CHECK(one.n == 1);

  // first intensity: mean count in a ball of radius 0.2 ~ 5 * pi * 0.04
  const int reps = 2000;
  double mean = 0, m2 = 0;
  TorusPoint c{{0.37, 0.61}};
  for (int r = 0; r < reps; ++r) {
    PointSet X = gen_dpp(S, {33, static_cast<std::uint64_t>(r)});
    int cnt = 0;
    for (std::size_t j = 0; j < X.n; ++j) cnt += torus_distance(L, X.point(j), c) <= 0.2;
    mean += cnt;
    m2 += cnt * cnt;
  }
  mean /= reps;
  double se = std::sqrt((m2 / reps - mean * mean) / reps);
  double expect = 5 * std::numbers::pi * 0.04;
  CHECK(std::abs(mean - expect) <= 3 * se + 1e-9);

  // pair sum against the closed form: E sum_{k != j} cos(2 pi <w0, xk - xj>)
  // equals minus the number of ordered mode pairs differing by w0
  double ps = 0, ps2 = 0;
  for (int r = 0; r < reps; ++r) {
    PointSet X = gen_dpp(S, {47, static_cast<std::uint64_t>(r)});
    double acc = 0;
    for (std::size_t k = 0; k < X.n; ++k)
      for (std::size_t j = 0; j < X.n; ++j) {
        if (j == k) continue;
        acc += std::cos(2 * std::numbers::pi * (X.frac(0, k) - X.frac(0, j)));
      }
    ps += acc;
    ps2 += acc * acc;
  }
  ps /= reps;
  double pse = std::sqrt((ps2 / reps - ps * ps) / reps);
  int pairs = 0;
  for (const auto& a : S.vectors)
    for (const auto& b : S.vectors)
      if (a.index[0] - b.index[0] == 1 && a.index[1] - b.index[1] == 0) ++pairs;
  CHECK(std::abs(ps - (-pairs)) <= 3 * pse);
}

TEST_CASE("gen_dpp one-point intensity is flat (chi-squared, 8x8 bins)") {
  Lattice L = z2();
  SpectrumSelection S = choose_spectrum(L, 10);
  std::vector<int> bins(64, 0);
  std::size_t total = 0;
  for (int r = 0; total < 10000; ++r) {
    PointSet X = gen_dpp(S, {71, static_cast<std::uint64_t>(r)});
    for (std::size_t j = 0; j < X.n; ++j) {
      int bx = std::min(7, static_cast<int>(X.frac(0, j) * 8));
      int by = std::min(7, static_cast<int>(X.frac(1, j) * 8));
      ++bins[8 * bx + by];
      ++total;
    }
  }
  double expect = static_cast<double>(total) / 64.0;
  double chi2 = 0;
  for (int b : bins) chi2 += (b - expect) * (b - expect) / expect;
  // 0.999 quantile of chi-squared with 63 dof
  CHECK(chi2 < 103.44237731987324);
}

TEST_CASE("csv round trip") {
  PointSet X = gen_uniform(z3(), 17, {123, 9});
  std::stringstream ss;
  write_pointset_csv(ss, X);
  std::string text = ss.str();
  CHECK(text.rfind("# lattice=", 0) == 0);
  CHECK(text.find("generator=uniform") != std::string::npos);
  std::stringstream in(text);
  PointSet Y = read_pointset_csv(in);
  CHECK(Y.n == X.n);
  CHECK(Y.lattice.dim == 3);
  CHECK(Y.coords == X.coords);
  CHECK(Y.provenance.generator == "uniform");
  CHECK(Y.provenance.seed == 123);
}
