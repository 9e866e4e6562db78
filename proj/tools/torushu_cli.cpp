// torushu CLI: point-set generation, variance / wce / discrepancy computation,
// and regime-scaling scans with CSV/JSON output.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "torushu/lattice.hpp"
#include "torushu/pointgen.hpp"
#include "torushu/qmc.hpp"
#include "torushu/variance.hpp"

namespace {

constexpr const char* kVersion = "torushu 0.1.0";

using nlohmann::json;
using namespace torushu;

Lattice resolve_lattice(const std::string& spec) {
  if (spec == "identity2") return lattice_from_basis(2, {1, 0, 0, 1});
  if (spec == "identity3") return lattice_from_basis(3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  if (spec == "hexagonal")
    return normalize_lattice(2, {1, 0.5, 0, std::sqrt(3.0) / 2});
  std::ifstream is(spec);
  if (!is) throw std::invalid_argument("unknown lattice preset or unreadable file: " + spec);
  return json::parse(is).get<Lattice>();
}

json estimate_json(const VarianceEstimate& e) {
  json j{{"method", to_string(e.method)},
         {"value", e.value},
         {"error_bound", e.error_bound},
         {"tolerance_met", e.tolerance_met}};
  if (e.truncation_radius > 0) j["truncation_radius"] = e.truncation_radius;
  if (e.sample_count > 0) j["sample_count"] = e.sample_count;
  return j;
}

json report_json(const RegimeReport& r) {
  json rows = json::array();
  for (const auto& d : r.inputs)
    rows.push_back({{"N", d.N}, {"R_or_t", d.R_or_t}, {"variance", d.variance}});
  return json{{"regime", to_string(r.regime)},
              {"fitted_exponent", r.fitted_exponent},
              {"fitted_constant", r.fitted_constant},
              {"r_squared", r.r_squared},
              {"log_correction", r.log_correction},
              {"verdict", to_string(r.verdict)},
              {"inputs", rows}};
}

void emit(const json& config, const json& result, const std::string& out_path,
          bool no_timestamp) {
  json doc{{"version", kVersion}, {"config", config}, {"result", result}};
  if (!no_timestamp)
    doc["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(
                           std::chrono::system_clock::now().time_since_epoch())
                           .count();
  if (out_path.empty() || out_path == "-") {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ofstream os(out_path);
    if (!os) throw std::runtime_error("cannot open " + out_path);
    os << doc.dump(2) << "\n";
  }
}

std::vector<long> parse_list(const std::string& s) {
  std::vector<long> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stol(tok));
  if (out.empty()) throw std::invalid_argument("empty list argument");
  return out;
}

std::vector<double> parse_dlist(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) throw std::invalid_argument("empty list argument");
  return out;
}

PointSet generate(const std::string& generator, const Lattice& L, long N, long m,
                  RngSpec rng) {
  if (generator == "uniform") return gen_uniform(L, static_cast<std::size_t>(N), rng);
  if (generator == "jittered") return gen_jittered(make_partition(L, static_cast<int>(m)), rng);
  if (generator == "sublattice") return gen_sublattice(L, static_cast<int>(m));
  if (generator == "dpp") return gen_dpp(choose_spectrum(L, static_cast<std::size_t>(N)), rng);
  throw std::invalid_argument("unknown generator: " + generator);
}

// Deterministic replicate sweep: stream ids fixed by replicate index, results
// reduced in index order regardless of --threads.
template <typename Fn>
std::vector<double> replicate_map(long replicates, int threads, Fn fn) {
  std::vector<double> out(static_cast<std::size_t>(replicates));
  if (threads <= 1) {
    for (long r = 0; r < replicates; ++r) out[static_cast<std::size_t>(r)] = fn(r);
    return out;
  }
  std::vector<std::thread> pool;
  std::atomic<long> next{0};
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      while (true) {
        long r = next.fetch_add(1);
        if (r >= replicates) return;
        out[static_cast<std::size_t>(r)] = fn(r);
      }
    });
  for (auto& th : pool) th.join();
  return out;
}

struct ScanArgs {
  std::string regime = "large";
  std::string generator = "uniform";
  std::string lattice = "identity2";
  std::string Ns, ms, t_grid;
  long N = 0;
  double R = 0.2;
  long replicates = 100;
  long seed = 1;
  int threads = 1;
  std::string method = "auto";
  std::string out, csv;
  bool no_timestamp = false;
};

double measure_variance(const PointSet& X, double R, const std::string& method) {
  if (method == "realspace") return variance_realspace(X, R).value;
  if (method == "spectral") {
    SpectralOptions opt;
    opt.tol = 1e-12;
    opt.max_radius = std::max(32.0, 8.0 / R);
    return variance_spectral(X, R, opt).value;
  }
  // auto
  double lambda1 = shortest_vector_length(X.lattice);
  if (2 * R < 0.999 * lambda1) return variance_realspace(X, R).value;
  SpectralOptions opt;
  opt.tol = 1e-12;
  opt.max_radius = std::max(32.0, 8.0 / R);
  return variance_spectral(X, R, opt).value;
}

int run_scan(const ScanArgs& a) {
  Lattice L = resolve_lattice(a.lattice);
  const int d = L.dim;
  Regime regime;
  if (a.regime == "large") regime = Regime::large;
  else if (a.regime == "small") regime = Regime::small;
  else if (a.regime == "threshold") regime = Regime::threshold;
  else throw std::invalid_argument("unknown regime: " + a.regime);

  std::ofstream csv;
  if (!a.csv.empty()) {
    csv.open(a.csv);
    if (!csv) throw std::runtime_error("cannot open " + a.csv);
    csv << "generator,d,N,R_or_t,replicate,variance,error\n";
  }
  char buf[64];
  auto csv_row = [&](long N, double rt, long rep, double v, double err) {
    if (!csv.is_open()) return;
    csv << a.generator << "," << d << "," << N << ",";
    std::snprintf(buf, sizeof buf, "%.17g", rt);
    csv << buf << "," << rep << ",";
    std::snprintf(buf, sizeof buf, "%.17g", v);
    csv << buf << ",";
    std::snprintf(buf, sizeof buf, "%.17g", err);
    csv << buf << "\n";
  };

  std::vector<RegimeDatum> data;

  if (regime == Regime::threshold) {
    if (a.N < 1) throw std::invalid_argument("threshold scan requires --N");
    if (a.t_grid.empty()) throw std::invalid_argument("threshold scan requires --t-grid");
    std::vector<double> ts = parse_dlist(a.t_grid);
    double Ninv = std::pow(static_cast<double>(a.N), -1.0 / d);
    if (a.generator == "dpp") {
      SpectrumSelection S = choose_spectrum(L, static_cast<std::size_t>(a.N));
      for (double t : ts) {
        VarianceEstimate e = expected_variance_dpp(S, t * Ninv, 1e-6);
        csv_row(a.N, t, 0, e.value, e.error_bound);
        data.push_back({static_cast<double>(a.N), t, e.value});
      }
    } else {
      for (std::size_t ti = 0; ti < ts.size(); ++ti) {
        double R = ts[ti] * Ninv;
        auto vals = replicate_map(a.replicates, a.threads, [&](long r) {
          RngSpec rng{static_cast<std::uint64_t>(a.seed),
                      static_cast<std::uint64_t>(ti * 100000 + r)};
          PointSet X = generate(a.generator, L, a.N, a.N, rng);
          return measure_variance(X, R, a.method);
        });
        double mean = 0;
        for (std::size_t r = 0; r < vals.size(); ++r) {
          mean += vals[r];
          csv_row(a.N, ts[ti], static_cast<long>(r), vals[r], 0);
        }
        mean /= static_cast<double>(vals.size());
        data.push_back({static_cast<double>(a.N), ts[ti], mean});
      }
    }
  } else {
    std::vector<long> values;
    bool use_m = false;
    if (!a.ms.empty()) {
      values = parse_list(a.ms);
      use_m = true;
    } else if (!a.Ns.empty()) {
      values = parse_list(a.Ns);
    } else {
      throw std::invalid_argument("scan requires --Ns or --ms");
    }
    for (std::size_t vi = 0; vi < values.size(); ++vi) {
      long m = use_m ? values[vi] : 0;
      long N = use_m ? static_cast<long>(std::llround(std::pow(values[vi], d))) : values[vi];
      long reps = (a.generator == "sublattice") ? 1 : a.replicates;
      auto vals = replicate_map(reps, a.threads, [&](long r) {
        RngSpec rng{static_cast<std::uint64_t>(a.seed),
                    static_cast<std::uint64_t>(vi * 100000 + r)};
        PointSet X = generate(a.generator, L, N, m, rng);
        return measure_variance(X, a.R, a.method);
      });
      double mean = 0;
      for (std::size_t r = 0; r < vals.size(); ++r) {
        mean += vals[r];
        csv_row(N, a.R, static_cast<long>(r), vals[r], 0);
      }
      mean /= static_cast<double>(vals.size());
      data.push_back({static_cast<double>(N), a.R, mean});
    }
  }

  RegimeReport rep = fit_regime(data, regime, d);
  json config{{"command", "scan"},     {"regime", a.regime},   {"generator", a.generator},
              {"lattice", a.lattice},  {"R", a.R},             {"Ns", a.Ns},
              {"ms", a.ms},            {"t_grid", a.t_grid},   {"N", a.N},
              {"replicates", a.replicates}, {"seed", a.seed},  {"threads", a.threads},
              {"method", a.method}};
  emit(config, report_json(rep), a.out, a.no_timestamp);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"torushu: hyperuniformity diagnostics for point sets on flat tori"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a point set");
  std::string g_lattice = "identity2", g_generator = "uniform", g_out;
  long g_N = 0, g_m = 0, g_seed = 0, g_stream = 0;
  gen->add_option("--lattice", g_lattice, "preset name or lattice JSON file");
  gen->add_option("--generator", g_generator, "uniform|jittered|sublattice|dpp");
  gen->add_option("--N", g_N, "point count (uniform, dpp)");
  gen->add_option("--m", g_m, "grid order (jittered, sublattice): N = m^d");
  gen->add_option("--seed", g_seed, "RNG seed");
  gen->add_option("--stream", g_stream, "RNG stream id");
  gen->add_option("-o,--output", g_out, "output CSV path")->required();

  // variance
  auto* var = app.add_subcommand("variance", "number variance of a point set");
  std::string v_points, v_method = "all", v_out;
  double v_R = 0.2, v_tol = 1e-6;
  long v_S = 200000, v_seed = 1;
  bool v_nots = false;
  var->add_option("--points", v_points, "point-set CSV")->required();
  var->add_option("--R", v_R, "ball radius")->required();
  var->add_option("--method", v_method, "spectral|realspace|montecarlo|all");
  var->add_option("--tol", v_tol, "spectral truncation tolerance");
  var->add_option("--S", v_S, "Monte Carlo centers");
  var->add_option("--seed", v_seed, "Monte Carlo seed");
  var->add_option("-o,--output", v_out, "output JSON path (default stdout)");
  var->add_flag("--no-timestamp", v_nots, "omit timestamp for byte-stable output");

  // wce
  auto* wc = app.add_subcommand("wce", "worst-case cubature error");
  std::string w_points, w_out;
  double w_alpha = 2.0, w_tol = 1e-10;
  bool w_nots = false;
  wc->add_option("--points", w_points)->required();
  wc->add_option("--alpha", w_alpha, "Sobolev smoothness (> d/2)");
  wc->add_option("--tol", w_tol, "truncation tolerance");
  wc->add_option("-o,--output", w_out);
  wc->add_flag("--no-timestamp", w_nots);

  // discrepancy
  auto* disc = app.add_subcommand("discrepancy", "L2 discrepancy");
  std::string dc_points, dc_out;
  double dc_tol = 1e-4;
  bool dc_nots = false;
  disc->add_option("--points", dc_points)->required();
  disc->add_option("--tol", dc_tol, "quadrature relative tolerance");
  disc->add_option("-o,--output", dc_out);
  disc->add_flag("--no-timestamp", dc_nots);

  // dpp-expected
  auto* de = app.add_subcommand("dpp-expected", "exact expected DPP variance");
  std::string de_lattice = "identity2", de_out;
  long de_N = 9;
  double de_R = 0.2, de_tol = 1e-6;
  bool de_nots = false;
  de->add_option("--lattice", de_lattice);
  de->add_option("--N", de_N)->required();
  de->add_option("--R", de_R)->required();
  de->add_option("--tol", de_tol);
  de->add_option("-o,--output", de_out);
  de->add_flag("--no-timestamp", de_nots);

  // jittered-expected
  auto* je = app.add_subcommand("jittered-expected", "expected jittered variance");
  std::string je_lattice = "identity2", je_out;
  long je_m = 4, je_S = 1000, je_seed = 1;
  double je_R = 0.15;
  bool je_nots = false;
  je->add_option("--lattice", je_lattice);
  je->add_option("--m", je_m)->required();
  je->add_option("--R", je_R)->required();
  je->add_option("--S-cells", je_S, "Monte Carlo pairs per cell");
  je->add_option("--seed", je_seed);
  je->add_option("-o,--output", je_out);
  je->add_flag("--no-timestamp", je_nots);

  // scan
  auto* sc = app.add_subcommand("scan", "regime scaling sweep + fit");
  ScanArgs sa;
  sc->add_option("--regime", sa.regime, "large|small|threshold");
  sc->add_option("--generator", sa.generator, "uniform|jittered|sublattice|dpp");
  sc->add_option("--lattice", sa.lattice);
  sc->add_option("--Ns", sa.Ns, "comma-separated point counts");
  sc->add_option("--ms", sa.ms, "comma-separated grid orders (N = m^d)");
  sc->add_option("--t-grid", sa.t_grid, "comma-separated t values (threshold)");
  sc->add_option("--N", sa.N, "fixed N (threshold regime)");
  sc->add_option("--R", sa.R, "ball radius (large/small regimes)");
  sc->add_option("--replicates", sa.replicates);
  sc->add_option("--seed", sa.seed);
  sc->add_option("--threads", sa.threads);
  sc->add_option("--method", sa.method, "auto|realspace|spectral");
  sc->add_option("-o,--output", sa.out, "report JSON path");
  sc->add_option("--csv", sa.csv, "per-replicate sweep CSV path");
  sc->add_flag("--no-timestamp", sa.no_timestamp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }

  try {
    if (gen->parsed()) {
      Lattice L = resolve_lattice(g_lattice);
      RngSpec rng{static_cast<std::uint64_t>(g_seed), static_cast<std::uint64_t>(g_stream)};
      PointSet X = generate(g_generator, L, g_N, g_m, rng);
      write_pointset_csv(g_out, X);
      return 0;
    }
    if (var->parsed()) {
      PointSet X = read_pointset_csv(v_points);
      json result = json::object();
      bool tol_ok = true;
      if (v_method == "spectral" || v_method == "all") {
        VarianceEstimate e = variance_spectral(X, v_R, v_tol);
        result["spectral"] = estimate_json(e);
        tol_ok = tol_ok && e.tolerance_met;
      }
      if (v_method == "realspace" || v_method == "all")
        result["realspace"] = estimate_json(variance_realspace(X, v_R));
      if (v_method == "montecarlo" || v_method == "all")
        result["montecarlo"] = estimate_json(variance_montecarlo(
            X, v_R, static_cast<std::size_t>(v_S),
            {static_cast<std::uint64_t>(v_seed), 0}));
      if (result.empty()) throw std::invalid_argument("unknown method: " + v_method);
      json config{{"command", "variance"}, {"points", v_points}, {"R", v_R},
                  {"method", v_method},    {"tol", v_tol},       {"S", v_S},
                  {"seed", v_seed}};
      emit(config, result, v_out, v_nots);
      return tol_ok ? 0 : 3;
    }
    if (wc->parsed()) {
      PointSet X = read_pointset_csv(w_points);
      KernelSpec K{X.lattice, w_alpha, w_tol};
      WceResult r = wce_full(X, K);
      json config{{"command", "wce"}, {"points", w_points}, {"alpha", w_alpha}, {"tol", w_tol}};
      emit(config,
           json{{"wce", r.wce},
                {"wce_sq", r.wce_sq},
                {"error_bound", r.error_bound},
                {"truncation_radius", r.truncation_radius},
                {"tolerance_met", r.tolerance_met}},
           w_out, w_nots);
      return r.tolerance_met ? 0 : 3;
    }
    if (disc->parsed()) {
      PointSet X = read_pointset_csv(dc_points);
      double v = l2_discrepancy(X, dc_tol);
      json config{{"command", "discrepancy"}, {"points", dc_points}, {"tol", dc_tol}};
      emit(config, json{{"l2_discrepancy", v}}, dc_out, dc_nots);
      return 0;
    }
    if (de->parsed()) {
      Lattice L = resolve_lattice(de_lattice);
      SpectrumSelection S = choose_spectrum(L, static_cast<std::size_t>(de_N));
      VarianceEstimate e = expected_variance_dpp(S, de_R, de_tol);
      json config{{"command", "dpp-expected"}, {"lattice", de_lattice}, {"N", de_N},
                  {"R", de_R},                 {"tol", de_tol}};
      emit(config, estimate_json(e), de_out, de_nots);
      return e.tolerance_met ? 0 : 3;
    }
    if (je->parsed()) {
      Lattice L = resolve_lattice(je_lattice);
      Partition P = make_partition(L, static_cast<int>(je_m));
      VarianceEstimate e = expected_variance_jittered(
          P, je_R, static_cast<std::size_t>(je_S), {static_cast<std::uint64_t>(je_seed), 0});
      json config{{"command", "jittered-expected"}, {"lattice", je_lattice}, {"m", je_m},
                  {"R", je_R},                      {"S_cells", je_S},       {"seed", je_seed}};
      emit(config, estimate_json(e), je_out, je_nots);
      return 0;
    }
    if (sc->parsed()) return run_scan(sa);
  } catch (const enumeration_cap_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 64;
}
