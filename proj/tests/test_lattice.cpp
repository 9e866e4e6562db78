#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "torushu/lattice.hpp"
#include "torushu/rng.hpp"

using namespace torushu;

namespace {

Lattice z2() { return lattice_from_basis(2, {1, 0, 0, 1}); }
Lattice z3() { return lattice_from_basis(3, {1, 0, 0, 0, 1, 0, 0, 0, 1}); }
Lattice hex() { return normalize_lattice(2, {1, 0.5, 0, std::sqrt(3.0) / 2}); }

}  // namespace

TEST_CASE("ball volumes") {
  CHECK(ball_volume(2, 1.0) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
  CHECK(ball_volume(3, 1.0) == doctest::Approx(4 * std::numbers::pi / 3).epsilon(1e-14));
  CHECK(ball_volume(2, 0.0) == 0.0);
  CHECK(ball_volume(5, 0.0) == 0.0);
  CHECK(ball_volume(3, 0.5) == doctest::Approx(4 * std::numbers::pi / 3 * 0.125).epsilon(1e-14));
}

TEST_CASE("lattice construction and normalization") {
  Lattice L = z2();
  CHECK(L.covolume == doctest::Approx(1.0));
  CHECK(L.unimodular());

  Lattice h = hex();
  CHECK(h.covolume == doctest::Approx(1.0).epsilon(1e-12));
  // normalized hexagonal: shortest vector (2/sqrt(3))^(1/2)
  CHECK(shortest_vector_length(h) ==
        doctest::Approx(std::sqrt(2 / std::sqrt(3.0))).epsilon(1e-12));

  Lattice raw = lattice_from_basis(2, {2, 0, 0, 2});
  CHECK(raw.covolume == doctest::Approx(4.0));
  Lattice n = normalize_lattice(raw);
  CHECK(n.covolume == doctest::Approx(1.0));
  CHECK(n.scale == doctest::Approx(2.0));

  CHECK_THROWS_AS(lattice_from_basis(2, {1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(lattice_from_basis(2, {1, 2, 2, 4}), std::invalid_argument);  // singular
}

TEST_CASE("dual basis and integrality") {
  for (const Lattice& L : {z2(), hex()}) {
    auto duals = enumerate_dual(L, 3.0);
    auto prims = enumerate_primal(L, 3.0);
    for (const auto& w : duals)
      for (const auto& v : prims) {
        double ip = 0;
        for (int i = 0; i < L.dim; ++i) ip += w.cartesian[i] * v.cartesian[i];
        CHECK(std::abs(ip - std::round(ip)) < 1e-9);
      }
  }
  // dual of Z^d is Z^d
  auto d2 = dual_basis(z2());
  CHECK(d2[0] == doctest::Approx(1.0));
  CHECK(d2[1] == doctest::Approx(0.0));
}

TEST_CASE("enumeration ordering, prefix stability, downward closure") {
  Lattice L = z2();
  auto v5 = enumerate_dual(L, 5.5);
  // brute-force count of integer points with |m| <= 5.5
  std::size_t expect = 0;
  for (int a = -6; a <= 6; ++a)
    for (int b = -6; b <= 6; ++b)
      if (a * a + b * b <= 5.5 * 5.5) ++expect;
  CHECK(v5.size() == expect);
  for (std::size_t i = 1; i < v5.size(); ++i) {
    CHECK(v5[i - 1].norm <= v5[i].norm + 1e-12);
    if (std::abs(v5[i - 1].norm - v5[i].norm) < 1e-12)
      CHECK(std::lexicographical_compare(v5[i - 1].index.begin(), v5[i - 1].index.end(),
                                         v5[i].index.begin(), v5[i].index.end()));
  }
  auto v3 = enumerate_dual(L, 3.0);
  for (std::size_t i = 0; i < v3.size(); ++i) CHECK(v3[i].index == v5[i].index);
}

TEST_CASE("half-space streaming matches full enumeration") {
  for (const Lattice& L : {z2(), hex()}) {
    std::size_t half = 0, full = 0;
    for_each_dual(L, 4.2, true, [&](const int*, const double*, double) { ++half; });
    for_each_dual(L, 4.2, false, [&](const int*, const double*, double) { ++full; });
    CHECK(full == 2 * half);
    CHECK(full + 1 == enumerate_dual(L, 4.2).size());
  }
}

TEST_CASE("enumeration cap raises") {
  CHECK_THROWS_AS(
      for_each_dual(z2(), 100.0, false, [](const int*, const double*, double) {}, 10),
      enumeration_cap_error);
}

TEST_CASE("shortest vector and half diameter") {
  CHECK(shortest_vector_length(z2()) == doctest::Approx(1.0));
  CHECK(shortest_vector_length(z3()) == doctest::Approx(1.0));
  CHECK(half_diameter(z2()) == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-14));
  CHECK(half_diameter(z3()) == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-14));
}

TEST_CASE("torus distance is a metric") {
  TorusPoint a{{0.1, 0.1}}, b{{0.9, 0.9}};
  Lattice L = z2();
  CHECK(torus_distance(L, a, b) ==
        doctest::Approx(std::sqrt(0.08)).epsilon(1e-12));  // wraps around
  RngStream rng({42, 0});
  for (int trial = 0; trial < 200; ++trial) {
    TorusPoint x{{rng.next_double(), rng.next_double()}};
    TorusPoint y{{rng.next_double(), rng.next_double()}};
    TorusPoint z{{rng.next_double(), rng.next_double()}};
    double dxy = torus_distance(L, x, y);
    CHECK(dxy == torus_distance(L, y, x));
    CHECK(dxy <= torus_distance(L, x, z) + torus_distance(L, z, y) + 1e-12);
    CHECK(dxy <= half_diameter(L) + 1e-12);
    CHECK(torus_distance(L, x, x) == 0.0);
  }
}

TEST_CASE("lattice json round trip") {
  Lattice h = hex();
  nlohmann::json j = h;
  CHECK(j.at("dim") == 2);
  CHECK(j.at("basis").size() == 4);
  Lattice back = j.get<Lattice>();
  CHECK(back.dim == h.dim);
  for (int i = 0; i < 4; ++i) CHECK(back.basis[i] == h.basis[i]);
}
