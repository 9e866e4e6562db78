#include "torushu/simd.hpp"

#include <cmath>
#include <numbers>

namespace torushu::simd {

namespace {

// Minimax-free Taylor coefficients; |theta| <= pi/4 after octant reduction
// keeps truncation below ~5e-17.
constexpr double kS[8] = {1.0,
                          -1.0 / 6,
                          1.0 / 120,
                          -1.0 / 5040,
                          1.0 / 362880,
                          -1.0 / 39916800,
                          1.0 / 6227020800.0,
                          -1.0 / 1307674368000.0};
constexpr double kC[9] = {1.0,
                          -1.0 / 2,
                          1.0 / 24,
                          -1.0 / 720,
                          1.0 / 40320,
                          -1.0 / 3628800,
                          1.0 / 479001600.0,
                          -1.0 / 87178291200.0,
                          1.0 / 20922789888000.0};

}  // namespace

void sincos2pi(double a, double& s, double& c) {
  double x = a - std::nearbyint(a);           // [-1/2, 1/2]
  double q = std::nearbyint(4.0 * x);         // octant, {-2..2}
  double r = std::fma(-q, 0.25, x);           // [-1/8, 1/8] turns
  double th = 2.0 * std::numbers::pi * r;
  double t = th * th;
  // fused Horner steps, matching the vector path rounding-for-rounding
  double ps = kS[7];
  for (int i = 6; i >= 0; --i) ps = std::fma(ps, t, kS[i]);
  double s0 = th * ps;
  double pc = kC[8];
  for (int i = 7; i >= 0; --i) pc = std::fma(pc, t, kC[i]);
  long qi = static_cast<long>(q);
  bool swap = qi & 1;
  double sv = swap ? pc : s0;
  double cv = swap ? s0 : pc;
  s = (qi & 2) ? -sv : sv;
  c = ((qi + 1) & 2) ? -cv : cv;
}

namespace {

SumCS weyl_sum_scalar(const double* const* coords, int d, std::size_t n, const double* m) {
  SumCS acc;
  for (std::size_t j = 0; j < n; ++j) {
    double phase = phase_dot(coords, d, j, m);
    double s, c;
    sincos2pi(phase, s, c);
    acc.c += c;
    acc.s += s;
  }
  return acc;
}

double weighted_cos_sum_scalar(const double* const* coords, int d, std::size_t n,
                               const double* m, const double* wgt) {
  double acc = 0;
  for (std::size_t j = 0; j < n; ++j) {
    double phase = phase_dot(coords, d, j, m);
    double s, c;
    sincos2pi(phase, s, c);
    acc += wgt[j] * c;
  }
  return acc;
}

void sincos_batch_scalar(const double* phase, std::size_t n, double* s, double* c) {
  for (std::size_t j = 0; j < n; ++j) sincos2pi(phase[j], s[j], c[j]);
}

std::size_t count_within_scalar(const double* const* coords, int d, std::size_t n,
                                const double* center, const double* scale, double r2) {
  std::size_t count = 0;
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0;
    for (int i = 0; i < d; ++i) {
      double u = coords[i][j] - center[i];
      u -= std::nearbyint(u);
      double y = u * scale[i];
      acc += y * y;
    }
    count += (acc <= r2);
  }
  return count;
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k = {"scalar", weyl_sum_scalar, weighted_cos_sum_scalar,
                            sincos_batch_scalar, count_within_scalar};
  return k;
}

}  // namespace torushu::simd
