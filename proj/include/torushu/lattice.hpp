#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace torushu {

// Thrown when a dual/primal enumeration would produce more vectors than the
// configured cap (default 5e6, override with env TORUSHU_CAP).
class enumeration_cap_error : public std::runtime_error {
 public:
  explicit enumeration_cap_error(const std::string& msg) : std::runtime_error(msg) {}
};

std::size_t enumeration_cap();

// Full-rank lattice A*Z^d. Columns of `basis` are the generators; storage is
// row-major. Most estimators require covolume 1 (see normalize_lattice).
struct Lattice {
  int dim = 0;
  std::vector<double> basis;  // row-major d x d
  double covolume = 0.0;
  double scale = 1.0;  // factor removed by normalize_lattice, 1 otherwise

  double entry(int i, int j) const { return basis[static_cast<std::size_t>(i) * dim + j]; }
  bool unimodular(double tol = 1e-12) const { return std::abs(covolume - 1.0) <= tol; }
};

// Validates and wraps a raw basis (no rescaling).
Lattice lattice_from_basis(int dim, std::vector<double> basis_row_major);

// Rescales to covolume 1, recording the removed scale factor |det A|^(1/d).
Lattice normalize_lattice(const Lattice& raw);
Lattice normalize_lattice(int dim, const std::vector<double>& basis_row_major);

// B = (A^T)^{-1}, row-major; columns of B generate the dual lattice.
std::vector<double> dual_basis(const Lattice& L);

struct TorusPoint {
  std::vector<double> frac;  // components in [0,1)
};

// A lattice vector together with its integer index: cartesian = M * index
// where M is the generating matrix (dual basis for enumerate_dual, A for
// enumerate_primal).
struct DualVector {
  std::vector<int> index;
  std::vector<double> cartesian;
  double norm = 0.0;
};

// All w in Lambda^* with |w| <= max_norm, sorted by (norm, lex index).
std::vector<DualVector> enumerate_dual(const Lattice& L, double max_norm,
                                       std::size_t cap = enumeration_cap());

// Same for the primal lattice Lambda.
std::vector<DualVector> enumerate_primal(const Lattice& L, double max_norm,
                                         std::size_t cap = enumeration_cap());

// Streaming enumeration for hot paths: calls fn(index, cartesian, norm) for
// every dual vector with 0 < |w| <= max_norm, unsorted. With half_space=true
// only one of each {w,-w} pair is visited (first nonzero index component > 0).
// Returns the number of vectors visited; throws enumeration_cap_error past cap.
std::size_t for_each_dual(const Lattice& L, double max_norm, bool half_space,
                          const std::function<void(const int*, const double*, double)>& fn,
                          std::size_t cap = enumeration_cap());

double shortest_vector_length(const Lattice& L);

// Half the longest diagonal of the fundamental parallelepiped.
double half_diameter(const Lattice& L);

// Covering-radius upper bound for the dual lattice (used by tail certificates).
double dual_covering_radius_bound(const Lattice& L);

double torus_distance(const Lattice& L, const TorusPoint& x, const TorusPoint& y);

double ball_volume(int d, double R);

void to_json(nlohmann::json& j, const Lattice& L);
void from_json(const nlohmann::json& j, Lattice& L);

}  // namespace torushu
