#include "torushu/bessel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace torushu {

namespace {

constexpr double kSeriesSwitch = 16.0;  // series/asymptotic handover
constexpr double kEnvSafety = 1.3;

long order_index(double nu) {
  long k2 = std::lround(2.0 * nu);
  if (std::abs(2.0 * nu - static_cast<double>(k2)) > 1e-12 || k2 < 1 || k2 > 16)
    throw std::invalid_argument("unsupported Bessel order");
  return k2;
}

// Ascending series, long double with Kahan accumulation. Adequate to ~1e-13
// absolute up to z ~ 18 (cancellation grows like I_nu(z)).
double series_j(double nu, double z) {
  const long double h = 0.5L * static_cast<long double>(z);
  long double term = std::pow(h, static_cast<long double>(nu)) /
                     std::tgammal(static_cast<long double>(nu) + 1.0L);
  const long double m4 = -h * h;
  long double sum = 0.0L, comp = 0.0L;
  for (int k = 0; k < 400; ++k) {
    long double y = term - comp;
    long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    term *= m4 / ((k + 1.0L) * (static_cast<long double>(nu) + k + 1.0L));
    if (std::fabs(term) < 1e-25L * (std::fabs(sum) + 1e-30L)) break;
  }
  return static_cast<double>(sum);
}

// Hankel asymptotic expansion for integer order n in {0,1}, z large.
long double asymptotic_j_int(int n, double z) {
  const long double zl = z;
  const long double mu = 4.0L * n * n;
  long double t = 1.0L, p = 1.0L, q = 0.0L, prev = 1e30L;
  for (int k = 0; k < 60; ++k) {
    long double next = t * (mu - (2.0L * k + 1.0L) * (2.0L * k + 1.0L)) /
                       ((k + 1.0L) * 8.0L * zl);
    if (std::fabs(next) > prev) break;  // optimal truncation
    prev = std::fabs(next);
    t = next;
    int kk = k + 1;  // term index of t
    long double sgn = ((kk / 2) % 2 == 0) ? 1.0L : -1.0L;
    if (kk % 2 == 0)
      p += sgn * t;
    else
      q += sgn * t;
    if (std::fabs(t) < 1e-22L) break;
  }
  const long double omega = zl - (2 * n + 1) * std::numbers::pi_v<long double> / 4.0L;
  return std::sqrt(2.0L / (std::numbers::pi_v<long double> * zl)) *
         (p * std::cos(omega) - q * std::sin(omega));
}

double upward_int(int n, double z, long double j0, long double j1) {
  if (n == 0) return static_cast<double>(j0);
  long double jm = j0, jc = j1;
  for (int k = 1; k < n; ++k) {
    long double jn = (2.0L * k / static_cast<long double>(z)) * jc - jm;
    jm = jc;
    jc = jn;
  }
  return static_cast<double>(jc);
}

// Closed trigonometric forms for half-integer orders, upward recurrence.
double trig_half(long k2, double z) {
  const long double zl = z;
  const long double s = std::sqrt(2.0L / (std::numbers::pi_v<long double> * zl));
  long double jm = s * std::sin(zl);                          // nu = 1/2
  if (k2 == 1) return static_cast<double>(jm);
  long double jc = s * (std::sin(zl) / zl - std::cos(zl));  // nu = 3/2
  for (long t = 3; t < k2; t += 2) {
    // J_{nu+1} = (2 nu / z) J_nu - J_{nu-1} with nu = t/2
    long double jn = (static_cast<long double>(t) / zl) * jc - jm;
    jm = jc;
    jc = jn;
  }
  return static_cast<double>(jc);
}

}  // namespace

double bessel_j(double nu, double z) {
  long k2 = order_index(nu);
  if (z < 0) throw std::domain_error("bessel_j: negative argument");
  if (z == 0) return 0.0;  // all supported orders are positive
  if (z <= kSeriesSwitch) return series_j(nu, z);
  if (k2 % 2 == 1) return trig_half(k2, z);
  int n = static_cast<int>(k2 / 2);
  return upward_int(n, z, asymptotic_j_int(0, z), asymptotic_j_int(1, z));
}

double bessel_envelope_sq(double nu, double z) {
  order_index(nu);
  if (z <= 0) throw std::domain_error("bessel_envelope_sq: argument must be positive");
  if (z <= nu) return 1.0;
  double amp2 = (2.0 * kEnvSafety / std::numbers::pi) / std::sqrt(z * z - nu * nu);
  return std::min(1.0, amp2);
}

}  // namespace torushu
