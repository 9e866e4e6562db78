#include "torushu/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include <Eigen/Dense>

namespace torushu {

namespace {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Mat as_matrix(const Lattice& L) {
  return Eigen::Map<const Mat>(L.basis.data(), L.dim, L.dim);
}

// Enumerate all x = M*k with |x| <= r. Box half-widths come from
// |k_i| = |<row_i(M^{-1}), x>| <= ||row_i(M^{-1})|| * |x|, which is sufficient
// by Cauchy-Schwarz. Visits candidates in odometer order (k_1 fastest).
std::size_t enumerate_ball(const Mat& M, double r, bool skip_zero, bool half_space,
                           std::size_t cap,
                           const std::function<void(const int*, const double*, double)>& fn) {
  const int d = static_cast<int>(M.rows());
  if (r < 0) throw std::invalid_argument("max_norm must be nonnegative");
  Mat Minv = M.inverse();
  std::vector<long> hw(d);
  for (int i = 0; i < d; ++i)
    hw[i] = static_cast<long>(std::floor(Minv.row(i).norm() * r * (1.0 + 1e-12) + 1e-9));

  std::vector<long> k(d);
  for (int i = 0; i < d; ++i) k[i] = -hw[i];
  std::vector<int> idx(d);
  std::vector<double> cart(d);
  const double r2 = r * r * (1.0 + 4e-12);
  std::size_t count = 0;
  while (true) {
    bool zero = true;
    for (int i = 0; i < d; ++i)
      if (k[i] != 0) { zero = false; break; }
    bool visit = !(zero && skip_zero);
    if (visit && half_space && !zero) {
      for (int i = 0; i < d; ++i) {
        if (k[i] > 0) break;
        if (k[i] < 0) { visit = false; break; }
      }
    }
    if (visit) {
      double n2 = 0;
      for (int i = 0; i < d; ++i) {
        double s = 0;
        for (int j = 0; j < d; ++j) s += M(i, j) * k[j];
        cart[i] = s;
        n2 += s * s;
      }
      if (n2 <= r2) {
        if (++count > cap) throw enumeration_cap_error("enumeration cap exceeded");
        for (int i = 0; i < d; ++i) idx[i] = static_cast<int>(k[i]);
        fn(idx.data(), cart.data(), std::sqrt(n2));
      }
    }
    int pos = 0;
    while (pos < d && k[pos] == hw[pos]) { k[pos] = -hw[pos]; ++pos; }
    if (pos == d) break;
    ++k[pos];
  }
  return count;
}

std::vector<DualVector> enumerate_sorted(const Mat& M, double r, std::size_t cap) {
  std::vector<DualVector> out;
  enumerate_ball(M, r, /*skip_zero=*/false, /*half_space=*/false, cap,
                 [&](const int* idx, const double* cart, double norm) {
                   DualVector v;
                   v.index.assign(idx, idx + M.rows());
                   v.cartesian.assign(cart, cart + M.rows());
                   v.norm = norm;
                   out.push_back(std::move(v));
                 });
  std::sort(out.begin(), out.end(), [](const DualVector& a, const DualVector& b) {
    double tol = 1e-9 * std::max(1.0, std::max(a.norm, b.norm));
    if (a.norm < b.norm - tol) return true;
    if (b.norm < a.norm - tol) return false;
    return a.index < b.index;
  });
  return out;
}

}  // namespace

std::size_t enumeration_cap() {
  if (const char* s = std::getenv("TORUSHU_CAP")) {
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end != s && v > 0) return static_cast<std::size_t>(v);
  }
  return 5'000'000;
}

Lattice lattice_from_basis(int dim, std::vector<double> basis_row_major) {
  if (dim < 1) throw std::invalid_argument("lattice dimension must be >= 1");
  if (basis_row_major.size() != static_cast<std::size_t>(dim) * dim)
    throw std::invalid_argument("basis must have dim*dim entries");
  Lattice L;
  L.dim = dim;
  L.basis = std::move(basis_row_major);
  double det = as_matrix(L).determinant();
  if (!(std::abs(det) > 1e-300) || !std::isfinite(det))
    throw std::invalid_argument("degenerate lattice");
  L.covolume = std::abs(det);
  return L;
}

Lattice normalize_lattice(const Lattice& raw) {
  Lattice L = raw;
  double s = std::pow(raw.covolume, 1.0 / raw.dim);
  for (double& a : L.basis) a /= s;
  L.scale = raw.scale * s;
  L.covolume = std::abs(as_matrix(L).determinant());
  return L;
}

Lattice normalize_lattice(int dim, const std::vector<double>& basis_row_major) {
  return normalize_lattice(lattice_from_basis(dim, basis_row_major));
}

std::vector<double> dual_basis(const Lattice& L) {
  Mat B = as_matrix(L).transpose().inverse();
  return {B.data(), B.data() + L.dim * L.dim};
}

std::vector<DualVector> enumerate_dual(const Lattice& L, double max_norm, std::size_t cap) {
  Mat B = as_matrix(L).transpose().inverse();
  return enumerate_sorted(B, max_norm, cap);
}

std::vector<DualVector> enumerate_primal(const Lattice& L, double max_norm, std::size_t cap) {
  return enumerate_sorted(as_matrix(L), max_norm, cap);
}

std::size_t for_each_dual(const Lattice& L, double max_norm, bool half_space,
                          const std::function<void(const int*, const double*, double)>& fn,
                          std::size_t cap) {
  Mat B = as_matrix(L).transpose().inverse();
  return enumerate_ball(B, max_norm, /*skip_zero=*/true, half_space, cap, fn);
}

double shortest_vector_length(const Lattice& L) {
  Mat A = as_matrix(L);
  double r = A.col(0).norm();
  for (int j = 1; j < L.dim; ++j) r = std::min(r, A.col(j).norm());
  double best = r;
  enumerate_ball(A, r, /*skip_zero=*/true, /*half_space=*/true, enumeration_cap(),
                 [&](const int*, const double*, double n) { best = std::min(best, n); });
  return best;
}

static double parallelepiped_half_diameter(const Mat& M) {
  const int d = static_cast<int>(M.rows());
  double best = 0;
  // s_0 = +1 w.l.o.g. (sign symmetry)
  for (long mask = 0; mask < (1L << (d - 1)); ++mask) {
    Eigen::VectorXd v = M.col(0);
    for (int j = 1; j < d; ++j) v += ((mask >> (j - 1)) & 1 ? -1.0 : 1.0) * M.col(j);
    best = std::max(best, v.norm());
  }
  return 0.5 * best;
}

double half_diameter(const Lattice& L) { return parallelepiped_half_diameter(as_matrix(L)); }

double dual_covering_radius_bound(const Lattice& L) {
  Mat B = as_matrix(L).transpose().inverse();
  return parallelepiped_half_diameter(B);
}

double torus_distance(const Lattice& L, const TorusPoint& x, const TorusPoint& y) {
  const int d = L.dim;
  if (static_cast<int>(x.frac.size()) != d || static_cast<int>(y.frac.size()) != d)
    throw std::invalid_argument("point dimension mismatch");
  Mat A = as_matrix(L);
  Eigen::VectorXd delta(d);
  for (int i = 0; i < d; ++i) delta[i] = x.frac[i] - y.frac[i];
  // Round to a candidate representative, then search a box guaranteed to
  // contain the minimizer: |k_i + delta_i| <= ||row_i(A^{-1})|| * d0.
  Eigen::VectorXd k0(d);
  for (int i = 0; i < d; ++i) k0[i] = -std::round(delta[i]);
  double d0 = (A * (delta + k0)).norm();
  Mat Ainv = A.inverse();
  std::vector<long> lo(d), hi(d), k(d);
  for (int i = 0; i < d; ++i) {
    double b = Ainv.row(i).norm() * d0 * (1 + 1e-12) + 1e-12;
    lo[i] = static_cast<long>(std::ceil(-delta[i] - b));
    hi[i] = static_cast<long>(std::floor(-delta[i] + b));
    k[i] = lo[i];
  }
  double best2 = d0 * d0;
  while (true) {
    double n2 = 0;
    for (int i = 0; i < d; ++i) {
      double s = 0;
      for (int j = 0; j < d; ++j) s += A(i, j) * (delta[j] + k[j]);
      n2 += s * s;
    }
    best2 = std::min(best2, n2);
    int pos = 0;
    while (pos < d && k[pos] == hi[pos]) { k[pos] = lo[pos]; ++pos; }
    if (pos == d) break;
    ++k[pos];
  }
  return std::sqrt(best2);
}

double ball_volume(int d, double R) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (R < 0) throw std::domain_error("radius must be nonnegative");
  return std::pow(std::numbers::pi, 0.5 * d) * std::pow(R, d) / std::tgamma(0.5 * d + 1.0);
}

void to_json(nlohmann::json& j, const Lattice& L) {
  j = nlohmann::json{{"dim", L.dim}, {"basis", L.basis}};
}

void from_json(const nlohmann::json& j, Lattice& L) {
  int dim = j.at("dim").get<int>();
  std::vector<double> basis = j.at("basis").get<std::vector<double>>();
  L = lattice_from_basis(dim, std::move(basis));
}

}  // namespace torushu
