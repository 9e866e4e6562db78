#pragma once

#include <vector>

#include "torushu/lattice.hpp"
#include "torushu/pointgen.hpp"
#include "torushu/variance.hpp"

namespace torushu {

// Reproducing-kernel data for the Sobolev space on the torus with Fourier
// weights (1 + 4 pi^2 |w|^2)^(-alpha).
struct KernelSpec {
  Lattice lattice;
  double alpha = 2.0;
  double truncation_tol = 1e-10;
};

double kernel_eval(const KernelSpec& K, const TorusPoint& x, const TorusPoint& y);

struct WceResult {
  double wce = 0;         // worst-case error
  double wce_sq = 0;      // its square (the computed quantity)
  double error_bound = 0; // rigorous bound on |wce_sq - truth|
  double truncation_radius = 0;
  bool tolerance_met = true;
};

WceResult wce_full(const PointSet& X, const KernelSpec& K);
double wce(const PointSet& X, const KernelSpec& K);

RegimeReport qmc_design_check(const std::vector<PointSet>& sets, double alpha,
                              double truncation_tol = 1e-10);

struct Lemma1Check {
  double lhs = 0;                   // number variance (spectral route)
  double rhs_without_constant = 0;  // R^{d-1} N^2 wce(alpha=(d+1)/2)^2
  double ratio = 0;
};

Lemma1Check lemma1_bound_check(const PointSet& X, double R);

}  // namespace torushu
