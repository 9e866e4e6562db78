#pragma once

#include <functional>

#include "torushu/lattice.hpp"

namespace torushu {

// Certified enclosure of a lattice-sum tail Sum_{w in Lambda*, |w| > W} q(|w|)
// for non-increasing, integrable q. Derived from counting-measure integration
// by parts with the two-sided ball-count bounds
//   omega_d (t - rho)^d <= #{|w| <= t} <= omega_d (t + rho)^d,
// rho a covering-radius bound of the dual lattice.
struct TailBound {
  double estimate = 0.0;    // midpoint value of the tail
  double half_width = 0.0;  // rigorous enclosure half-width (plus quadrature slack)
  double upper() const { return (estimate > 0 ? estimate : 0.0) + half_width; }
};

// count_leq_W must be the exact number of dual vectors with |w| <= W,
// including the origin.
TailBound dual_tail_sum(const Lattice& L, double W, std::size_t count_leq_W,
                        const std::function<double(double)>& q);

// Adaptive Simpson on [a, b] to absolute tolerance tol.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth = 40);

// Integral over (W, infinity) of a decaying integrand, via the substitution
// t = W + u/(1-u).
double integrate_tail(const std::function<double(double)>& f, double W, double rel_tol);

}  // namespace torushu
