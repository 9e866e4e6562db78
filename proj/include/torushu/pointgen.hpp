#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "torushu/lattice.hpp"
#include "torushu/rng.hpp"

namespace torushu {

struct Provenance {
  std::string generator = "unspecified";
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

// N torus points in fractional coordinates, stored dimension-major so the
// coordinate arrays feed the SIMD kernels directly.
struct PointSet {
  Lattice lattice;
  std::size_t n = 0;
  std::vector<double> coords;  // coords[i*n + j] = frac coordinate i of point j
  Provenance provenance;

  const double* dim_data(int i) const { return coords.data() + static_cast<std::size_t>(i) * n; }
  double frac(int i, std::size_t j) const { return coords[static_cast<std::size_t>(i) * n + j]; }
  TorusPoint point(std::size_t j) const;
  std::vector<const double*> dim_ptrs() const;
};

PointSet pointset_from_points(const Lattice& L, const std::vector<TorusPoint>& pts,
                              Provenance prov = {});

PointSet gen_uniform(const Lattice& L, std::size_t N, RngSpec rng);

// m^d congruent grid cells, images of the cubic partition of [0,1)^d under A.
struct Partition {
  Lattice lattice;
  int m = 1;
  std::size_t cell_count() const;
  // fractional box of cell k (odometer order): [lo, lo + 1/m) per coordinate
  std::vector<double> cell_origin(std::size_t k) const;
  double cell_diameter_bound() const;  // sqrt(d) * max column norm / m
};

Partition make_partition(const Lattice& L, int m);

PointSet gen_jittered(const Partition& P, RngSpec rng);

PointSet gen_sublattice(const Lattice& L, int m);

// The N smallest dual vectors in (norm, lexicographic index) order; supports
// the rank-N projection kernel.
struct SpectrumSelection {
  Lattice lattice;
  std::vector<DualVector> vectors;
  std::size_t N = 0;
};

SpectrumSelection choose_spectrum(const Lattice& L, std::size_t N);

std::complex<double> dpp_kernel_eval(const SpectrumSelection& S, const TorusPoint& x,
                                     const TorusPoint& y);

// Exact sequential sampler for the projection process: point k is drawn by
// rejection (constant envelope N, uniform proposals) from the squared residual
// of the feature vector after projecting out previously accepted points.
PointSet gen_dpp(const SpectrumSelection& S, RngSpec rng);

void write_pointset_csv(std::ostream& os, const PointSet& X);
void write_pointset_csv(const std::string& path, const PointSet& X);
PointSet read_pointset_csv(std::istream& is);
PointSet read_pointset_csv(const std::string& path);

}  // namespace torushu
