#pragma once

#include <limits>
#include <string>
#include <vector>

#include "torushu/lattice.hpp"
#include "torushu/pointgen.hpp"
#include "torushu/rng.hpp"

namespace torushu {

enum class VarianceMethod { spectral, realspace, montecarlo, dpp_expected, jittered_expected };

std::string to_string(VarianceMethod m);

struct VarianceEstimate {
  double value = 0.0;
  VarianceMethod method = VarianceMethod::spectral;
  // rigorous truncation bound (spectral / dpp_expected), standard error
  // (montecarlo / jittered_expected), 0 for realspace
  double error_bound = 0.0;
  double truncation_radius = 0.0;
  std::size_t sample_count = 0;
  bool tolerance_met = true;
};

// Fourier coefficient of the ball indicator: R^{d/2} |w|^{-d/2} J_{d/2}(2 pi |w| R).
double ball_coefficient(const Lattice& L, const DualVector& w, double R);

// |sum_j e^{-2 pi i <w, x_j>}|^2.
double weyl_sum_sq(const PointSet& X, const DualVector& w);

// Volume of the intersection of two radius-R balls at center distance t.
double lens_volume(int d, double R, double t);

// Sum over the full dual lattice of the squared nonzero-mode ball coefficients,
// evaluated in closed form via wrapped ball-overlap volumes (Parseval):
//   Sum_{w != 0} a_w(R)^2 = Sum_{lambda in Lambda, |lambda| < 2R}
//                           lens_volume(d, R, |lambda|) - Vol(B_R)^2.
double coefficient_sum_total(const Lattice& L, double R);

struct SpectralOptions {
  double tol = 1e-6;
  double max_radius = std::numeric_limits<double>::infinity();
  std::size_t cap = 0;  // 0 -> enumeration_cap()
};

VarianceEstimate variance_spectral(const PointSet& X, double R, double tol);
VarianceEstimate variance_spectral(const PointSet& X, double R, const SpectralOptions& opt);

VarianceEstimate variance_realspace(const PointSet& X, double R);

VarianceEstimate variance_montecarlo(const PointSet& X, double R, std::size_t S, RngSpec rng);

VarianceEstimate expected_variance_dpp(const SpectrumSelection& S, double R, double tol);

VarianceEstimate expected_variance_jittered(const Partition& P, double R,
                                            std::size_t S_cells, RngSpec rng);

double l2_discrepancy(const PointSet& X, double quad_tol);

enum class Regime { large, small, threshold };
enum class Verdict { consistent, inconsistent, inconclusive };

std::string to_string(Regime r);
std::string to_string(Verdict v);

struct RegimeDatum {
  double N = 0;
  double R_or_t = 0;
  double variance = 0;
};

struct RegimeReport {
  Regime regime = Regime::large;
  double fitted_exponent = 0;
  double fitted_constant = 0;
  double r_squared = 0;
  double log_correction = 0;  // threshold regime only: coefficient of log log t
  Verdict verdict = Verdict::inconclusive;
  std::vector<RegimeDatum> inputs;
};

struct ThresholdProfile {
  std::vector<double> t_values;
  std::vector<VarianceEstimate> variance_at_t;
  std::size_t N = 0;
};

RegimeReport fit_regime(const std::vector<RegimeDatum>& data, Regime regime, int dim,
                        double delta = 0.05);

// Least-squares line fit; r2 defined as 1 when the residuals vanish.
struct OlsFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
};
OlsFit ols_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace torushu
