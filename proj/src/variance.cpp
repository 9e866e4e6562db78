#include "torushu/variance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "torushu/bessel.hpp"
#include "torushu/simd.hpp"
#include "torushu/tail.hpp"

namespace torushu {

namespace {

// Regularized incomplete beta I_x(a,b) via Lentz's continued fraction.
double betacf(double a, double b, double x) {
  const double eps = 1e-16, fpmin = 1e-300;
  double qab = a + b, qap = a + 1, qam = a - 1;
  double c = 1, d = 1 - qab * x / qap;
  if (std::abs(d) < fpmin) d = fpmin;
  d = 1 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h;
}

double betai(double a, double b, double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1) / (a + b + 2)) return bt * betacf(a, b, x) / a;
  return 1 - bt * betacf(b, a, 1 - x) / b;
}

double spectral_weight(int d, double R, double r) {
  double j = bessel_j(0.5 * d, 2 * std::numbers::pi * r * R);
  return std::pow(R, d) * std::pow(r, -d) * j * j;
}

// Overlap volume of the torus balls B(x,R), B(y,R) for embedded (2R < lambda1)
// or periodized balls in general: sum of Euclidean lenses over translates.
double pair_overlap(const Lattice& L, const std::vector<DualVector>& translates,
                    const double* dfrac, double R) {
  const int d = L.dim;
  double wrapped[8], cart[8];
  for (int j = 0; j < d; ++j) wrapped[j] = dfrac[j] - std::nearbyint(dfrac[j]);
  for (int i = 0; i < d; ++i) {
    double s = 0;
    for (int j = 0; j < d; ++j) s += L.entry(i, j) * wrapped[j];
    cart[i] = s;
  }
  const double fourR2 = 4 * R * R;
  double acc = 0;
  for (const DualVector& lam : translates) {
    double n2 = 0;
    for (int i = 0; i < d; ++i) {
      double u = cart[i] + lam.cartesian[i];
      n2 += u * u;
    }
    if (n2 < fourR2) acc += lens_volume(d, R, std::sqrt(n2));
  }
  return acc;
}

// After wrapping, |delta| <= half_diameter, so |delta + lambda| < 2R forces
// |lambda| < 2R + half_diameter.
std::vector<DualVector> overlap_translates(const Lattice& L, double R) {
  return enumerate_primal(L, 2 * R + half_diameter(L) * (1 + 1e-12));
}

bool diagonal_basis(const Lattice& L) {
  for (int i = 0; i < L.dim; ++i)
    for (int j = 0; j < L.dim; ++j)
      if (i != j && std::abs(L.entry(i, j)) > 1e-14) return false;
  return true;
}

}  // namespace

std::string to_string(VarianceMethod m) {
  switch (m) {
    case VarianceMethod::spectral: return "spectral";
    case VarianceMethod::realspace: return "realspace";
    case VarianceMethod::montecarlo: return "montecarlo";
    case VarianceMethod::dpp_expected: return "dpp_expected";
    case VarianceMethod::jittered_expected: return "jittered_expected";
  }
  return "unknown";
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::large: return "large";
    case Regime::small: return "small";
    case Regime::threshold: return "threshold";
  }
  return "unknown";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::consistent: return "consistent";
    case Verdict::inconsistent: return "inconsistent";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

double ball_coefficient(const Lattice& L, const DualVector& w, double R) {
  if (w.norm <= 0) throw std::invalid_argument("w = 0: use ball_volume for a_0");
  if (!(R > 0) || R > half_diameter(L) * (1 + 1e-12))
    throw std::invalid_argument("radius outside (0, half_diameter]");
  const int d = L.dim;
  return std::pow(R, 0.5 * d) * std::pow(w.norm, -0.5 * d) *
         bessel_j(0.5 * d, 2 * std::numbers::pi * w.norm * R);
}

double weyl_sum_sq(const PointSet& X, const DualVector& w) {
  const int d = X.lattice.dim;
  double m[8];
  for (int i = 0; i < d; ++i) m[i] = w.index[i];
  auto ptrs = X.dim_ptrs();
  auto cs = simd::active_kernels().weyl_sum(ptrs.data(), d, X.n, m);
  return cs.c * cs.c + cs.s * cs.s;
}

double lens_volume(int d, double R, double t) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(R > 0)) throw std::invalid_argument("radius must be positive");
  if (t < 0) throw std::invalid_argument("distance must be nonnegative");
  if (t >= 2 * R) return 0;
  if (t == 0) return ball_volume(d, R);
  double a = 0.5 * t / R;  // plane offset / R, in (0,1)
  double x = 1 - a * a;
  double cap = 0.5 * ball_volume(d, R) * betai(0.5 * (d + 1), 0.5, x);
  return 2 * cap;
}

double coefficient_sum_total(const Lattice& L, double R) {
  if (!(R > 0)) throw std::invalid_argument("radius must be positive");
  double vol = ball_volume(L.dim, R);
  double acc = 0;
  for (const DualVector& lam : enumerate_primal(L, 2 * R)) {
    if (lam.norm < 2 * R) acc += lens_volume(L.dim, R, lam.norm);
  }
  return acc - vol * vol;
}

VarianceEstimate variance_spectral(const PointSet& X, double R, double tol) {
  SpectralOptions opt;
  opt.tol = tol;
  return variance_spectral(X, R, opt);
}

VarianceEstimate variance_spectral(const PointSet& X, double R, const SpectralOptions& opt) {
  const Lattice& L = X.lattice;
  const int d = L.dim;
  const double H = half_diameter(L);
  if (!(R > 0) || R >= H) throw std::invalid_argument("radius outside (0, half_diameter)");
  if (!(opt.tol > 0)) throw std::invalid_argument("tol must be positive");
  const std::size_t cap = opt.cap ? opt.cap : enumeration_cap();
  const double N = static_cast<double>(X.n);
  const double nu = 0.5 * d;
  const double Rd = std::pow(R, d);
  const double Tclosed = coefficient_sum_total(L, R);
  auto ptrs = X.dim_ptrs();
  const auto& kernels = simd::active_kernels();

  auto q = [&](double t) {
    return std::pow(t, -d) * bessel_envelope_sq(nu, 2 * std::numbers::pi * t * R);
  };

  double W = std::min(std::max(6.0, 2.0 / R), opt.max_radius);
  VarianceEstimate best;
  best.method = VarianceMethod::spectral;
  bool have = false;
  while (true) {
    double m[8];
    double main = 0, tw = 0;
    std::size_t halfcount = 0;
    try {
      for_each_dual(
          L, W, /*half_space=*/true,
          [&](const int* idx, const double*, double r) {
            double F = spectral_weight(d, R, r);
            for (int i = 0; i < d; ++i) m[i] = idx[i];
            auto cs = kernels.weyl_sum(ptrs.data(), d, X.n, m);
            main += F * (cs.c * cs.c + cs.s * cs.s);
            tw += F;
            ++halfcount;
          },
          cap);
    } catch (const enumeration_cap_error&) {
      if (!have) throw;
      best.tolerance_met = false;
      return best;
    }
    TailBound tail = dual_tail_sum(L, W, 2 * halfcount + 1, q);
    double diag = std::max(0.0, Tclosed - 2 * tw);
    best.value = 2 * main + N * diag;
    best.error_bound =
        N * (N - 1) * Rd * tail.upper() + 1e-14 * (1 + std::abs(best.value));
    best.truncation_radius = W;
    have = true;
    if (best.error_bound <= opt.tol) {
      best.tolerance_met = true;
      return best;
    }
    if (W >= opt.max_radius * (1 - 1e-12)) {
      best.tolerance_met = false;
      return best;
    }
    W = std::min(W * 1.6, opt.max_radius);
  }
}

VarianceEstimate variance_realspace(const PointSet& X, double R) {
  const Lattice& L = X.lattice;
  const int d = L.dim;
  const double lambda1 = shortest_vector_length(L);
  if (!(R > 0) || R >= half_diameter(L))
    throw std::invalid_argument("radius outside (0, half_diameter)");
  if (2 * R >= lambda1) throw std::invalid_argument("ball not embedded");
  const std::size_t N = X.n;
  const double vol = ball_volume(d, R);
  auto translates = overlap_translates(L, R);

  double dfrac[8];
  double acc = 0;
  for (std::size_t k = 0; k + 1 < N; ++k)
    for (std::size_t j = k + 1; j < N; ++j) {
      for (int i = 0; i < d; ++i) dfrac[i] = X.frac(i, k) - X.frac(i, j);
      acc += 2 * pair_overlap(L, translates, dfrac, R);
    }
  VarianceEstimate est;
  est.method = VarianceMethod::realspace;
  est.value = static_cast<double>(N) * vol + acc -
              static_cast<double>(N) * static_cast<double>(N) * vol * vol;
  est.error_bound = 0;
  return est;
}

VarianceEstimate variance_montecarlo(const PointSet& X, double R, std::size_t S, RngSpec rng) {
  const Lattice& L = X.lattice;
  const int d = L.dim;
  if (!(R > 0) || R >= half_diameter(L))
    throw std::invalid_argument("radius outside (0, half_diameter)");
  if (S < 100) throw std::invalid_argument("S must be >= 100");
  const double expect = static_cast<double>(X.n) * ball_volume(d, R);
  auto ptrs = X.dim_ptrs();
  const auto& kernels = simd::active_kernels();
  RngStream stream(rng);

  const bool fast = diagonal_basis(L);
  double scale[8], center[8];
  if (fast)
    for (int i = 0; i < d; ++i) scale[i] = std::abs(L.entry(i, i));

  std::vector<TorusPoint> pts;
  if (!fast) {
    pts.reserve(X.n);
    for (std::size_t j = 0; j < X.n; ++j) pts.push_back(X.point(j));
  }

  double acc2 = 0, acc4 = 0;
  TorusPoint c;
  c.frac.resize(d);
  for (std::size_t s = 0; s < S; ++s) {
    for (int i = 0; i < d; ++i) center[i] = stream.next_double();
    std::size_t count;
    if (fast) {
      count = kernels.count_within(ptrs.data(), d, X.n, center, scale, R * R);
    } else {
      for (int i = 0; i < d; ++i) c.frac[i] = center[i];
      count = 0;
      for (const TorusPoint& p : pts) count += (torus_distance(L, p, c) <= R);
    }
    double dev = static_cast<double>(count) - expect;
    acc2 += dev * dev;
    acc4 += dev * dev * dev * dev;
  }
  VarianceEstimate est;
  est.method = VarianceMethod::montecarlo;
  est.value = acc2 / static_cast<double>(S);
  double var = std::max(0.0, acc4 / static_cast<double>(S) - est.value * est.value);
  est.error_bound = std::sqrt(var / static_cast<double>(S));
  est.sample_count = S;
  return est;
}

VarianceEstimate expected_variance_dpp(const SpectrumSelection& S, double R, double tol) {
  const Lattice& L = S.lattice;
  const int d = L.dim;
  if (!(R > 0)) throw std::invalid_argument("radius must be positive");
  if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
  const std::size_t N = S.N;
  const double Tclosed = coefficient_sum_total(L, R);

  // Pair sum over the selected modes; with the closed-form total this makes
  // the double sum over D_N x (dual \ D_N) exact — no truncation left.
  double P = 0;
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = a + 1; b < N; ++b) {
      double n2 = 0;
      for (int i = 0; i < d; ++i) {
        double u = S.vectors[a].cartesian[i] - S.vectors[b].cartesian[i];
        n2 += u * u;
      }
      P += 2 * spectral_weight(d, R, std::sqrt(n2));
    }
  VarianceEstimate est;
  est.method = VarianceMethod::dpp_expected;
  est.value = static_cast<double>(N) * Tclosed - P;
  est.error_bound = 1e-12 * (static_cast<double>(N) * std::abs(Tclosed) + P + 1);
  est.tolerance_met = est.error_bound <= tol;
  est.sample_count = N;
  return est;
}

VarianceEstimate expected_variance_jittered(const Partition& P, double R,
                                            std::size_t S_cells, RngSpec rng) {
  const Lattice& L = P.lattice;
  const int d = L.dim;
  const double lambda1 = shortest_vector_length(L);
  if (!(R > 0) || R >= half_diameter(L))
    throw std::invalid_argument("radius outside (0, half_diameter)");
  if (2 * R >= lambda1) throw std::invalid_argument("ball not embedded");
  if (S_cells < 100) throw std::invalid_argument("S_cells must be >= 100");
  const std::size_t ncells = P.cell_count();
  const double vol = ball_volume(d, R);
  auto translates = overlap_translates(L, R);
  RngStream stream(rng);

  double total = 0, var_total = 0;
  double dfrac[8];
  for (std::size_t k = 0; k < ncells; ++k) {
    double acc = 0, acc2 = 0;
    for (std::size_t s = 0; s < S_cells; ++s) {
      for (int i = 0; i < d; ++i) dfrac[i] = (stream.next_double() - stream.next_double()) / P.m;
      double ov = pair_overlap(L, translates, dfrac, R);
      acc += ov;
      acc2 += ov * ov;
    }
    double mean = acc / static_cast<double>(S_cells);
    double var = std::max(0.0, acc2 / static_cast<double>(S_cells) - mean * mean);
    total += mean;
    var_total += var / static_cast<double>(S_cells);
  }
  VarianceEstimate est;
  est.method = VarianceMethod::jittered_expected;
  est.value = static_cast<double>(ncells) * vol - total;
  est.error_bound = std::sqrt(var_total);
  est.sample_count = S_cells;
  return est;
}

double l2_discrepancy(const PointSet& X, double quad_tol) {
  if (!(quad_tol > 0)) throw std::invalid_argument("quad_tol must be positive");
  const Lattice& L = X.lattice;
  const double H = half_diameter(L);
  const double lambda1 = shortest_vector_length(L);

  auto integrand = [&](double R) -> double {
    if (R <= 1e-9 * H) return 0;
    if (R >= H) R = H * (1 - 1e-9);
    if (2 * R < 0.999 * lambda1) return variance_realspace(X, R).value;
    SpectralOptions opt;
    opt.tol = 1e-12;
    opt.max_radius = std::max(24.0, 8.0 / R);
    return variance_spectral(X, R, opt).value;
  };
  double coarse = (integrand(0.25 * H) + integrand(0.5 * H) + integrand(0.85 * H)) * H / 3;
  double I = integrate_adaptive(integrand, 0, H * (1 - 1e-9),
                                quad_tol * std::max(coarse, 1e-12));
  return std::sqrt(std::max(0.0, I));
}

OlsFit ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw std::invalid_argument("need >= 2 paired samples");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0) throw std::invalid_argument("degenerate abscissae");
  OlsFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssres = 0, sstot = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double e = y[i] - (f.intercept + f.slope * x[i]);
    ssres += e * e;
    sstot += (y[i] - my) * (y[i] - my);
  }
  f.r_squared = sstot <= 1e-20 ? (ssres <= 1e-18 ? 1.0 : 0.0)
                               : std::clamp(1.0 - ssres / sstot, 0.0, 1.0);
  return f;
}

RegimeReport fit_regime(const std::vector<RegimeDatum>& data, Regime regime, int dim,
                        double delta) {
  if (data.size() < 4) throw std::invalid_argument("need at least 4 data rows");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!(data[i].variance > 0))
      throw std::invalid_argument("non-positive variance at row " + std::to_string(i));
    double x;
    switch (regime) {
      case Regime::large: x = std::log(data[i].N); break;
      case Regime::small: x = std::log(data[i].N * ball_volume(dim, data[i].R_or_t)); break;
      case Regime::threshold: x = std::log(data[i].R_or_t); break;
      default: throw std::invalid_argument("bad regime");
    }
    xs.push_back(x);
    ys.push_back(std::log(data[i].variance));
  }
  OlsFit f = ols_fit(xs, ys);
  RegimeReport rep;
  rep.regime = regime;
  rep.fitted_exponent = f.slope;
  rep.fitted_constant = std::exp(f.intercept);
  rep.r_squared = f.r_squared;
  rep.inputs = data;

  if (regime == Regime::threshold) {
    // optional multiplicative log-correction: y ~ a + b x + c log(max(log t, .1))
    Eigen::MatrixXd M(xs.size(), 3);
    Eigen::VectorXd Y(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      M(static_cast<long>(i), 0) = 1;
      M(static_cast<long>(i), 1) = xs[i];
      M(static_cast<long>(i), 2) = std::log(std::max(xs[i], 0.1));
      Y(static_cast<long>(i)) = ys[i];
    }
    Eigen::Vector3d beta = (M.transpose() * M).ldlt().solve(M.transpose() * Y);
    rep.log_correction = beta(2);
  }

  double thr = regime == Regime::threshold ? (dim - 1) + delta : 1 - delta;
  if (f.slope <= thr)
    rep.verdict = f.r_squared >= 0.9 ? Verdict::consistent : Verdict::inconclusive;
  else
    rep.verdict = f.r_squared >= 0.9 ? Verdict::inconsistent : Verdict::inconclusive;
  return rep;
}

}  // namespace torushu
