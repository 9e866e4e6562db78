#pragma once

#include <cmath>
#include <cstddef>

namespace torushu::simd {

// Shared phase accumulator: first term a plain product, the rest fused, so the
// scalar and AVX2 paths round identically lane by lane.
inline double phase_dot(const double* const* coords, int d, std::size_t j, const double* m) {
  double phase = m[0] * coords[0][j];
  for (int i = 1; i < d; ++i) phase = std::fma(m[i], coords[i][j], phase);
  return phase;
}

struct SumCS {
  double c = 0.0;
  double s = 0.0;
};

// Runtime-dispatched inner kernels. `coords` is dimension-major: coords[i]
// points at the i-th coordinate array of n elements. All phases are in turns
// (cycles), i.e. the angle is 2*pi*phase.
struct Kernels {
  const char* name;

  // sum over j of (cos, sin)(2*pi * sum_i m[i]*coords[i][j])
  SumCS (*weyl_sum)(const double* const* coords, int d, std::size_t n, const double* m);

  // sum over j of wgt[j] * cos(2*pi * sum_i m[i]*coords[i][j])
  double (*weighted_cos_sum)(const double* const* coords, int d, std::size_t n,
                             const double* m, const double* wgt);

  // per-element sin/cos of 2*pi*phase[j]
  void (*sincos_batch)(const double* phase, std::size_t n, double* s, double* c);

  // #{ j : sum_i (wrap(coords[i][j] - center[i]) * scale[i])^2 <= r2 },
  // wrap() reducing to [-1/2, 1/2); valid for diagonal bases only.
  std::size_t (*count_within)(const double* const* coords, int d, std::size_t n,
                              const double* center, const double* scale, double r2);
};

const Kernels& scalar_kernels();
const Kernels* avx2_kernels();  // nullptr when unsupported

// Preferred kernels for this process: AVX2 when the CPU supports it, unless
// overridden with TORUSHU_SIMD=scalar|avx2.
const Kernels& active_kernels();

// Scalar reference sin/cos of 2*pi*a for arbitrary real a; the vector variants
// implement the identical reduction + polynomial, so results agree closely.
void sincos2pi(double a, double& s, double& c);

}  // namespace torushu::simd
