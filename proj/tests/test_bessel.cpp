#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

#include "support/bessel_oracle.hpp"
#include "torushu/bessel.hpp"
#include "torushu/rng.hpp"

using namespace torushu;
using torushu::testing::bessel_j_oracle;

TEST_CASE("reference values") {
  // frozen from an independent arbitrary-precision evaluation (40 digits)
  struct Row {
    double nu, z, j;
  };
  const Row rows[] = {
      {0.5, 0.5, 0.54097378993452809133},   {0.5, 3.0, 0.065008182877375778114},
      {0.5, 30.0, -0.14392965337039988914}, {0.5, 50.0, -0.029605831888924612568},
      {1.0, 0.5, 0.24226845767487388638},   {1.0, 3.0, 0.33905895852593645893},
      {1.0, 30.0, -0.11875106261662293652}, {1.0, 50.0, -0.097511828125175137661},
      {1.5, 0.5, 0.091701699625651302638},  {1.5, 3.0, 0.47771821508709177155},
      {1.5, 30.0, -0.027267945711177687796},{1.5, 50.0, -0.10947687298831803539},
      {2.0, 0.5, 0.030604023458682641307},  {2.0, 3.0, 0.48609126058589107691},
      {2.0, 30.0, 0.078451246073265348901}, {2.0, 50.0, -0.059712800794258820511},
      {3.0, 0.5, 0.0025637299945872440754}, {3.0, 3.0, 0.30906272225525164362},
      {3.0, 30.0, 0.12921122875972498304},  {3.0, 50.0, 0.092734804061634432021},
  };
  for (const Row& r : rows) {
    CHECK(std::abs(bessel_j(r.nu, r.z) - r.j) < 1e-13);
    CHECK(std::abs(bessel_j_oracle(r.nu, r.z) - r.j) < 1e-14);
  }
}

TEST_CASE("small-argument and closed-form identities") {
  CHECK(bessel_j(1.0, 0.0) == 0.0);
  CHECK(bessel_j(0.5, 0.0) == 0.0);
  CHECK(bessel_j(3.0, 0.0) == 0.0);
  CHECK(std::abs(bessel_j(0.5, std::numbers::pi)) < 1e-14);  // J_{1/2}(pi) = 0
  for (double z = 0.1; z <= 100.0; z *= 1.37) {
    double closed = std::sqrt(2 / (std::numbers::pi * z)) * std::sin(z);
    CHECK(bessel_j(0.5, z) ==
          doctest::Approx(closed).epsilon(1e-12).scale(std::abs(closed) + 1e-3));
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(bessel_j(1.0, -0.1), std::domain_error);
  CHECK_THROWS_AS(bessel_j(0.25, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(bessel_j(8.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(bessel_envelope_sq(1.0, 0.0), std::domain_error);
}

TEST_CASE("oracle agreement on dense grid") {
  // supports the acceptance accuracy target at unit-test scale
  for (double nu : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 6.0, 8.0}) {
    double worst = 0;
    for (int i = 0; i <= 1500; ++i) {
      double z = 50.0 * i / 1500.0;
      worst = std::max(worst, std::abs(bessel_j(nu, z) - bessel_j_oracle(nu, z)));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("branch overlap band") {
  // both branches (series below the switch, asymptotics above) feed values in
  // [14, 18]; the oracle pins the agreement there
  for (double nu : {1.0, 2.0, 3.0, 5.0, 8.0})
    for (double z = 14.0; z <= 18.0; z += 0.0625)
      CHECK(std::abs(bessel_j(nu, z) - bessel_j_oracle(nu, z)) < 1e-11);
}

TEST_CASE("three-term recurrence residual") {
  for (double nu : {1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 7.0}) {
    for (double z = 0.1; z <= 100.0; z += 0.7) {
      double lhs = bessel_j(nu - 1, z) + bessel_j(nu + 1, z);
      double rhs = (2 * nu / z) * bessel_j(nu, z);
      CHECK(std::abs(lhs - rhs) <= 1e-9 * (1 + std::abs(bessel_j(nu, z))));
    }
  }
}

TEST_CASE("large-argument relative accuracy") {
  // amplitude-relative agreement with the sqrt(2/(pi z)) cos(...) asymptotic
  // phase for J_{1/2} (exact closed form) out to 1e5
  for (double z : {1e3, 1e4, 1e5}) {
    double amp = std::sqrt(2 / (std::numbers::pi * z));
    double closed = amp * std::sin(z);
    CHECK(std::abs(bessel_j(0.5, z) - closed) < 1e-9 * amp);
  }
}

TEST_CASE("envelope soundness and shape") {
  RngStream rng({9, 0});
  for (int i = 0; i < 100000; ++i) {
    double nu = 0.5 * (1 + (rng.next_u64() % 16));
    double z = 1e-3 + 100.0 * rng.next_double();
    double j = bessel_j(nu, z);
    CHECK(j * j <= bessel_envelope_sq(nu, z));
  }
  // decays like C/z for z >> nu and is clamped by 1
  CHECK(bessel_envelope_sq(1.0, 1000.0) <= (2 * 1.3 / std::numbers::pi) / 999.0);
  CHECK(bessel_envelope_sq(1.5, 1e-6) == 1.0);
  // J_1's first zero: envelope stays positive
  CHECK(bessel_envelope_sq(1.0, 3.8317) > 0.0);
  CHECK(bessel_j(1.0, 3.8317059702075123156) * bessel_j(1.0, 3.8317059702075123156) < 1e-20);
  // non-increasing in z
  double prev = bessel_envelope_sq(2.0, 0.5);
  for (double z = 0.6; z < 50; z += 0.1) {
    double cur = bessel_envelope_sq(2.0, z);
    CHECK(cur <= prev + 1e-15);
    prev = cur;
  }
}
