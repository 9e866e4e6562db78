#include "torushu/pointgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "torushu/simd.hpp"

namespace torushu {

namespace {

double wrap01(double x) {
  double f = x - std::floor(x);
  return f < 1.0 ? f : 0.0;
}

}  // namespace

TorusPoint PointSet::point(std::size_t j) const {
  TorusPoint p;
  p.frac.resize(lattice.dim);
  for (int i = 0; i < lattice.dim; ++i) p.frac[i] = frac(i, j);
  return p;
}

std::vector<const double*> PointSet::dim_ptrs() const {
  std::vector<const double*> ptrs(lattice.dim);
  for (int i = 0; i < lattice.dim; ++i) ptrs[i] = dim_data(i);
  return ptrs;
}

PointSet pointset_from_points(const Lattice& L, const std::vector<TorusPoint>& pts,
                              Provenance prov) {
  if (pts.empty()) throw std::invalid_argument("point set must be nonempty");
  PointSet X;
  X.lattice = L;
  X.n = pts.size();
  X.provenance = std::move(prov);
  X.coords.resize(static_cast<std::size_t>(L.dim) * pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (static_cast<int>(pts[j].frac.size()) != L.dim)
      throw std::invalid_argument("point dimension mismatch");
    for (int i = 0; i < L.dim; ++i) X.coords[static_cast<std::size_t>(i) * X.n + j] = wrap01(pts[j].frac[i]);
  }
  return X;
}

PointSet gen_uniform(const Lattice& L, std::size_t N, RngSpec rng) {
  if (N == 0) throw std::invalid_argument("N must be >= 1");
  PointSet X;
  X.lattice = L;
  X.n = N;
  X.coords.resize(static_cast<std::size_t>(L.dim) * N);
  RngStream stream(rng);
  for (std::size_t j = 0; j < N; ++j)
    for (int i = 0; i < L.dim; ++i) X.coords[static_cast<std::size_t>(i) * N + j] = stream.next_double();
  X.provenance = {"uniform", {{"N", N}}, rng.seed, rng.stream_id};
  return X;
}

std::size_t Partition::cell_count() const {
  std::size_t c = 1;
  for (int i = 0; i < lattice.dim; ++i) c *= static_cast<std::size_t>(m);
  return c;
}

std::vector<double> Partition::cell_origin(std::size_t k) const {
  std::vector<double> lo(lattice.dim);
  for (int i = 0; i < lattice.dim; ++i) {
    lo[i] = static_cast<double>(k % m) / m;
    k /= m;
  }
  return lo;
}

double Partition::cell_diameter_bound() const {
  double maxcol = 0;
  for (int j = 0; j < lattice.dim; ++j) {
    double s = 0;
    for (int i = 0; i < lattice.dim; ++i) s += lattice.entry(i, j) * lattice.entry(i, j);
    maxcol = std::max(maxcol, std::sqrt(s));
  }
  return std::sqrt(static_cast<double>(lattice.dim)) * maxcol / m;
}

Partition make_partition(const Lattice& L, int m) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  double cells = std::pow(static_cast<double>(m), L.dim);
  if (cells > static_cast<double>(enumeration_cap()))
    throw enumeration_cap_error("partition cell count exceeds cap");
  Partition P;
  P.lattice = L;
  P.m = m;
  return P;
}

PointSet gen_jittered(const Partition& P, RngSpec rng) {
  const int d = P.lattice.dim;
  const std::size_t N = P.cell_count();
  PointSet X;
  X.lattice = P.lattice;
  X.n = N;
  X.coords.resize(static_cast<std::size_t>(d) * N);
  RngStream stream(rng);
  for (std::size_t k = 0; k < N; ++k) {
    std::vector<double> lo = P.cell_origin(k);
    for (int i = 0; i < d; ++i)
      X.coords[static_cast<std::size_t>(i) * N + k] = lo[i] + stream.next_double() / P.m;
  }
  X.provenance = {"jittered", {{"m", P.m}}, rng.seed, rng.stream_id};
  return X;
}

PointSet gen_sublattice(const Lattice& L, int m) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  Partition P = make_partition(L, m);
  const std::size_t N = P.cell_count();
  PointSet X;
  X.lattice = L;
  X.n = N;
  X.coords.resize(static_cast<std::size_t>(L.dim) * N);
  for (std::size_t k = 0; k < N; ++k) {
    std::vector<double> lo = P.cell_origin(k);
    for (int i = 0; i < L.dim; ++i) X.coords[static_cast<std::size_t>(i) * N + k] = lo[i];
  }
  X.provenance = {"sublattice", {{"m", m}}, 0, 0};
  return X;
}

SpectrumSelection choose_spectrum(const Lattice& L, std::size_t N) {
  if (N == 0) throw std::invalid_argument("N must be >= 1");
  const int d = L.dim;
  const double omega = ball_volume(d, 1.0);
  double r = std::pow(static_cast<double>(N) / omega, 1.0 / d) + 2.0;
  std::vector<DualVector> all = enumerate_dual(L, r);
  while (all.size() < N) {
    r *= 1.4;
    all = enumerate_dual(L, r);
  }
  SpectrumSelection S;
  S.lattice = L;
  S.N = N;
  S.vectors.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(N));
  return S;
}

std::complex<double> dpp_kernel_eval(const SpectrumSelection& S, const TorusPoint& x,
                                     const TorusPoint& y) {
  const int d = S.lattice.dim;
  double cs = 0, sn = 0;
  for (const DualVector& w : S.vectors) {
    double phase = 0;
    for (int i = 0; i < d; ++i) phase += w.index[i] * (x.frac[i] - y.frac[i]);
    double s, c;
    simd::sincos2pi(phase, s, c);
    cs += c;
    sn += s;
  }
  return {cs, sn};
}

PointSet gen_dpp(const SpectrumSelection& S, RngSpec rng) {
  const int d = S.lattice.dim;
  const std::size_t N = S.N;
  const auto& kernels = simd::active_kernels();
  RngStream stream(rng);

  // feature vector phi(x)_w = e^{2 pi i <x, w>}, evaluated via mode indices
  std::vector<double> midx(static_cast<std::size_t>(d) * N);  // dimension-major
  for (std::size_t w = 0; w < N; ++w)
    for (int i = 0; i < d; ++i) midx[static_cast<std::size_t>(i) * N + w] = S.vectors[w].index[i];

  std::vector<std::vector<std::complex<double>>> basis;  // orthonormal accepted features
  basis.reserve(N);
  std::vector<double> phase(N), sv(N), cv(N), x(d);
  std::vector<std::complex<double>> phi(N), resid(N);

  auto eval_phi = [&](const std::vector<double>& xf) {
    for (std::size_t w = 0; w < N; ++w) {
      double p = 0;
      for (int i = 0; i < d; ++i) p += midx[static_cast<std::size_t>(i) * N + w] * xf[i];
      phase[w] = p;
    }
    kernels.sincos_batch(phase.data(), N, sv.data(), cv.data());
    for (std::size_t w = 0; w < N; ++w) phi[w] = {cv[w], sv[w]};
  };

  PointSet X;
  X.lattice = S.lattice;
  X.n = N;
  X.coords.resize(static_cast<std::size_t>(d) * N);

  const long cap = std::max<long>(100000, 2000 * static_cast<long>(N));
  for (std::size_t k = 0; k < N; ++k) {
    long tries = 0;
    while (true) {
      if (++tries > cap) throw std::runtime_error("sampler stalled");
      for (int i = 0; i < d; ++i) x[i] = stream.next_double();
      double u = stream.next_double();
      eval_phi(x);
      double proj2 = 0;
      for (const auto& e : basis) {
        std::complex<double> c{0, 0};
        for (std::size_t w = 0; w < N; ++w) c += std::conj(e[w]) * phi[w];
        proj2 += std::norm(c);
      }
      double r2 = static_cast<double>(N) - proj2;  // squared residual norm
      if (u * static_cast<double>(N) >= r2) continue;
      // Accepted: orthonormalize the residual (two projection passes).
      resid = phi;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& e : basis) {
          std::complex<double> c{0, 0};
          for (std::size_t w = 0; w < N; ++w) c += std::conj(e[w]) * resid[w];
          for (std::size_t w = 0; w < N; ++w) resid[w] -= c * e[w];
        }
      }
      double nr = 0;
      for (std::size_t w = 0; w < N; ++w) nr += std::norm(resid[w]);
      nr = std::sqrt(nr);
      if (nr < 1e-8 * std::sqrt(static_cast<double>(N - k))) continue;  // degenerate direction
      for (std::size_t w = 0; w < N; ++w) resid[w] /= nr;
      basis.push_back(resid);
      for (int i = 0; i < d; ++i) X.coords[static_cast<std::size_t>(i) * N + k] = x[i];
      break;
    }
  }
  X.provenance = {"dpp", {{"N", N}}, rng.seed, rng.stream_id};
  return X;
}

void write_pointset_csv(std::ostream& os, const PointSet& X) {
  nlohmann::json lj = X.lattice;
  os << "# lattice=" << lj.dump() << ", generator=" << X.provenance.generator
     << ", seed=" << X.provenance.seed << "\n";
  char buf[64];
  for (std::size_t j = 0; j < X.n; ++j) {
    for (int i = 0; i < X.lattice.dim; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", X.frac(i, j));
      os << (i ? "," : "") << buf;
    }
    os << "\n";
  }
}

void write_pointset_csv(const std::string& path, const PointSet& X) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_pointset_csv(os, X);
}

PointSet read_pointset_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header.rfind("# lattice=", 0) != 0)
    throw std::runtime_error("missing point-set header");
  auto gpos = header.find(", generator=");
  if (gpos == std::string::npos) throw std::runtime_error("malformed point-set header");
  Lattice L = nlohmann::json::parse(header.substr(10, gpos - 10)).get<Lattice>();
  Provenance prov;
  auto spos = header.find(", seed=", gpos);
  prov.generator = header.substr(gpos + 12, spos == std::string::npos
                                                ? std::string::npos
                                                : spos - (gpos + 12));
  if (spos != std::string::npos) prov.seed = std::stoull(header.substr(spos + 7));

  std::vector<TorusPoint> pts;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    TorusPoint p;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) p.frac.push_back(std::stod(cell));
    if (static_cast<int>(p.frac.size()) != L.dim)
      throw std::runtime_error("bad row width in point-set file");
    pts.push_back(std::move(p));
  }
  return pointset_from_points(L, pts, std::move(prov));
}

PointSet read_pointset_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_pointset_csv(is);
}

}  // namespace torushu
