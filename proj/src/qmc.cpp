#include "torushu/qmc.hpp"

#include <cmath>
#include <numbers>

#include "torushu/simd.hpp"
#include "torushu/tail.hpp"

namespace torushu {

namespace {

void check_alpha(const Lattice& L, double alpha) {
  if (!(alpha > 0.5 * L.dim))
    throw std::invalid_argument("alpha must exceed d/2 for a finite norm");
}

double sobolev_weight(double alpha, double r) {
  return std::pow(1.0 + 4 * std::numbers::pi * std::numbers::pi * r * r, -alpha);
}

}  // namespace

double kernel_eval(const KernelSpec& K, const TorusPoint& x, const TorusPoint& y) {
  const Lattice& L = K.lattice;
  const int d = L.dim;
  check_alpha(L, K.alpha);
  if (!(K.truncation_tol > 0)) throw std::invalid_argument("truncation_tol must be positive");
  double delta[8];
  for (int i = 0; i < d; ++i) delta[i] = x.frac[i] - y.frac[i];

  auto q = [&](double t) { return sobolev_weight(K.alpha, t); };
  double W = 4.0;
  double value = 0;
  while (true) {
    double acc = 0;
    std::size_t halfcount = 0;
    try {
      for_each_dual(L, W, /*half_space=*/true,
                    [&](const int* idx, const double*, double r) {
                      double phase = 0;
                      for (int i = 0; i < d; ++i) phase += idx[i] * delta[i];
                      double s, c;
                      simd::sincos2pi(phase, s, c);
                      acc += sobolev_weight(K.alpha, r) * c;
                      ++halfcount;
                    });
    } catch (const enumeration_cap_error&) {
      return value;  // best completed truncation
    }
    value = 1.0 + 2 * acc;  // w = 0 carries weight 1
    TailBound tail = dual_tail_sum(L, W, 2 * halfcount + 1, q);
    if (tail.upper() < K.truncation_tol) return value;
    W *= 1.6;
  }
}

WceResult wce_full(const PointSet& X, const KernelSpec& K) {
  const Lattice& L = X.lattice;
  const int d = L.dim;
  check_alpha(L, K.alpha);
  if (!(K.truncation_tol > 0)) throw std::invalid_argument("truncation_tol must be positive");
  const double N = static_cast<double>(X.n);
  auto ptrs = X.dim_ptrs();
  const auto& kernels = simd::active_kernels();
  auto q = [&](double t) { return sobolev_weight(K.alpha, t); };

  double W = 6.0;
  WceResult best;
  bool have = false;
  while (true) {
    double m[8];
    double main = 0;
    std::size_t halfcount = 0;
    try {
      for_each_dual(L, W, /*half_space=*/true,
                    [&](const int* idx, const double*, double r) {
                      for (int i = 0; i < d; ++i) m[i] = idx[i];
                      auto cs = kernels.weyl_sum(ptrs.data(), d, X.n, m);
                      main += sobolev_weight(K.alpha, r) * (cs.c * cs.c + cs.s * cs.s);
                      ++halfcount;
                    });
    } catch (const enumeration_cap_error&) {
      if (!have) throw;
      best.tolerance_met = false;
      return best;
    }
    TailBound tail = dual_tail_sum(L, W, 2 * halfcount + 1, q);
    // exact diagonal part of the tail modes (each |Weyl|^2 >= ... = N + cross
    // terms); completing it leaves only the cross-term tail in the bound
    best.wce_sq = 2 * main / (N * N) + std::max(0.0, tail.estimate) / N;
    best.error_bound = (1.0 - 1.0 / N) * tail.upper() + tail.half_width / N;
    best.truncation_radius = W;
    best.wce = std::sqrt(std::max(0.0, best.wce_sq));
    have = true;
    if (best.error_bound < K.truncation_tol) {
      best.tolerance_met = true;
      return best;
    }
    W *= 1.6;
  }
}

double wce(const PointSet& X, const KernelSpec& K) { return wce_full(X, K).wce; }

RegimeReport qmc_design_check(const std::vector<PointSet>& sets, double alpha,
                              double truncation_tol) {
  if (sets.size() < 4) throw std::invalid_argument("need at least 4 point sets");
  const int d = sets.front().lattice.dim;
  check_alpha(sets.front().lattice, alpha);
  std::vector<double> xs, ys;
  RegimeReport rep;
  rep.regime = Regime::large;
  for (const PointSet& X : sets) {
    KernelSpec K{X.lattice, alpha, truncation_tol};
    double e = wce(X, K);
    if (!(e > 0)) throw std::invalid_argument("degenerate wce in design check");
    xs.push_back(std::log(static_cast<double>(X.n)));
    ys.push_back(std::log(e));
    rep.inputs.push_back({static_cast<double>(X.n), alpha, e});
  }
  OlsFit f = ols_fit(xs, ys);
  rep.fitted_exponent = f.slope;
  rep.fitted_constant = std::exp(f.intercept);
  rep.r_squared = f.r_squared;
  double thr = -alpha / d + 0.1;
  if (f.r_squared < 0.9)
    rep.verdict = Verdict::inconclusive;
  else
    rep.verdict = f.slope <= thr ? Verdict::consistent : Verdict::inconsistent;
  return rep;
}

Lemma1Check lemma1_bound_check(const PointSet& X, double R) {
  const Lattice& L = X.lattice;
  const int d = L.dim;
  if (!(R > 0) || R >= half_diameter(L))
    throw std::invalid_argument("radius outside (0, half_diameter)");
  const double N = static_cast<double>(X.n);

  SpectralOptions opt;
  opt.tol = std::max(1e-10, 0.02 * N * coefficient_sum_total(L, R));
  VarianceEstimate v = variance_spectral(X, R, opt);

  // aim the wce truncation at a few percent of the i.i.d.-scale wce^2,
  // (K(0) - 1)/N, so the ratio stays accurate as N grows
  KernelSpec K{L, 0.5 * (d + 1), 1e-3};
  double k0 = kernel_eval(K, X.point(0), X.point(0));
  K.truncation_tol = std::max(1e-7, 0.02 * (k0 - 1.0) / N);
  WceResult w = wce_full(X, K);

  Lemma1Check out;
  out.lhs = v.value;
  out.rhs_without_constant = std::pow(R, d - 1) * N * N * w.wce_sq;
  out.ratio = out.lhs / out.rhs_without_constant;
  return out;
}

}  // namespace torushu
