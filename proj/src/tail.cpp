#include "torushu/tail.hpp"

#include <cmath>

namespace torushu {

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b,
               double fb, double m, double fm, double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth) {
  if (!(b > a)) return 0.0;
  double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
  return simpson(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

double integrate_tail(const std::function<double(double)>& f, double W, double rel_tol) {
  auto g = [&](double u) {
    if (u >= 1.0 - 1e-12) return 0.0;
    double inv = 1.0 / (1.0 - u);
    return f(W + u * inv) * inv * inv;
  };
  double coarse = std::abs(g(0.0)) + std::abs(g(0.5)) + std::abs(g(0.9)) + 1e-300;
  return integrate_adaptive(g, 0.0, 1.0, rel_tol * coarse, 44);
}

TailBound dual_tail_sum(const Lattice& L, double W, std::size_t count_leq_W,
                        const std::function<double(double)>& q) {
  const int d = L.dim;
  const double omega = ball_volume(d, 1.0);
  const double rho = dual_covering_radius_bound(L);
  const double qW = q(W);

  auto shell = [&](double t) { return q(t) * std::pow(t, d - 1); };
  double main_int = omega * d * integrate_tail(shell, W, 1e-9);

  auto band = [&](double t) {
    double lo = t > rho ? std::pow(t - rho, d - 1) : 0.0;
    return q(t) * (std::pow(t + rho, d - 1) - lo);
  };
  double ew = omega * (std::pow(W + rho, d) - (W > rho ? std::pow(W - rho, d) : 0.0));
  double unc = qW * ew + omega * d * integrate_tail(band, W, 1e-9);

  TailBound tb;
  tb.estimate = qW * (omega * std::pow(W, d) - static_cast<double>(count_leq_W)) + main_int;
  tb.half_width = unc * 1.0000001 + 1e-300;
  return tb;
}

}  // namespace torushu
