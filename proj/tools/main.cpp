// Config-driven experiment runner. Every subcommand reads a JSON config,
// computes in memory, then writes its artifacts atomically (temp + rename)
// together with a manifest recording the config hash and per-file checksums.
// Exit codes: 0 success, 2 invalid config, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "anneal/capacity.hpp"
#include "anneal/equilibrium.hpp"
#include "anneal/fpe1d.hpp"
#include "anneal/landscape.hpp"
#include "anneal/numerics.hpp"
#include "anneal/orlicz.hpp"
#include "anneal/potential.hpp"
#include "anneal/schedule.hpp"
#include "anneal/sde.hpp"
#include "anneal/wpi.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace anneal;

namespace {

constexpr const char* kVersion = "anneal 1.0.0";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// Collects artifacts in memory; nothing touches the output directory until
/// write_all, which stages each file under a .tmp name and renames it.
class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {}

  void add(const std::string& name, std::string content) {
    files_[name] = std::move(content);
  }

  void write_all(const json& manifest_base) {
    fs::create_directories(dir_);
    json manifest = manifest_base;
    manifest["artifacts"] = json::object();
    for (const auto& [name, content] : files_) {
      write_atomic(name, content);
      manifest["artifacts"][name] = fnv1a_hex(content);
    }
    write_atomic("manifest.json", manifest.dump(2) + "\n");
  }

  void write_failure_manifest(const json& manifest_base,
                              const std::string& error) {
    fs::create_directories(dir_);
    json manifest = manifest_base;
    manifest["status"] = "error";
    manifest["error"] = error;
    write_atomic("manifest.json", manifest.dump(2) + "\n");
  }

 private:
  void write_atomic(const std::string& name, const std::string& content) {
    fs::path final_path = dir_ / name;
    fs::path tmp_path = dir_ / (name + ".tmp");
    {
      std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot open " + tmp_path.string());
      out << content;
    }
    fs::rename(tmp_path, final_path);
  }

  fs::path dir_;
  std::map<std::string, std::string> files_;
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return j;
}

const json& need(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("config missing key: " + key);
  return j.at(key);
}

Potential potential_from(const json& j) {
  const json& pj = need(j, "potential");
  std::string name = need(pj, "name").get<std::string>();
  std::vector<double> params;
  if (pj.contains("params")) params = pj.at("params").get<std::vector<double>>();
  try {
    return make_builtin(name, params);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }
}

Schedule schedule_from(const json& j) {
  const json& sj = need(j, "schedule");
  Schedule s;
  std::string kind = need(sj, "kind").get<std::string>();
  if (kind == "logarithmic")
    s.kind = ScheduleKind::logarithmic;
  else if (kind == "constant")
    s.kind = ScheduleKind::constant;
  else if (kind == "power")
    s.kind = ScheduleKind::power;
  else
    throw ConfigError("schedule kind: " + kind);
  s.c = need(sj, "c").get<double>();
  if (sj.contains("t_offset")) s.t_offset = sj.at("t_offset").get<double>();
  if (sj.contains("exponent")) s.exponent = sj.at("exponent").get<double>();
  if (s.c <= 0.0) throw ConfigError("schedule: c must be positive");
  return s;
}

std::uint64_t seed_from(const json& j, std::uint64_t cli_seed, bool seed_set) {
  if (seed_set) return cli_seed;
  if (!j.contains("seed")) throw ConfigError("config missing key: seed");
  return j.at("seed").get<std::uint64_t>();
}

std::vector<double> record_times_from(const json& j, double t0, double t_end) {
  if (j.contains("record_times"))
    return j.at("record_times").get<std::vector<double>>();
  int n = j.contains("n_record") ? j.at("n_record").get<int>() : 20;
  if (n < 2) throw ConfigError("n_record must be >= 2");
  std::vector<double> times(n);
  for (int i = 0; i < n; ++i) {
    double u = static_cast<double>(i) / (n - 1);
    times[i] = t0 * std::pow(t_end / t0, u);  // log-spaced
  }
  times.front() = t0;
  times.back() = t_end;
  return times;
}

// Side-of-barrier split for a 1D double well: the saddle is the max of V
// between the two local minima; returns (barrier_x, false_side_is_left).
std::pair<double, bool> well_split(const Potential& p, double lo, double hi) {
  const int n = 4000;
  double h = (hi - lo) / n;
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = p.value1(lo + (i + 0.5) * h);
  std::vector<int> minima;
  for (int i = 1; i + 1 < n; ++i)
    if (v[i] < v[i - 1] && v[i] <= v[i + 1]) minima.push_back(i);
  if (minima.size() < 2)
    throw std::runtime_error("well_split: potential is not a double well");
  int a = minima.front(), b = minima.back();
  int saddle = a;
  for (int i = a; i <= b; ++i)
    if (v[i] > v[saddle]) saddle = i;
  double barrier_x = lo + (saddle + 0.5) * h;
  bool false_left = p.argmin[0] > barrier_x;
  return {barrier_x, false_left};
}

double side_mass(const DensityTrajectory& traj, std::size_t k, double split,
                 bool left) {
  double h = traj.grid.h();
  double mass = 0.0;
  for (int i = 0; i < traj.grid.n; ++i) {
    double x = traj.grid.center(i);
    if ((left && x < split) || (!left && x >= split)) mass += h * traj.m[k][i];
  }
  return mass;
}

// ---------------------------------------------------------------------------
// Subcommands.
// ---------------------------------------------------------------------------

void run_landscape(const json& cfg, Artifacts& art) {
  Potential p = potential_from(cfg);
  const json& bj = need(cfg, "box");
  Box box{need(bj, "lo").get<Vec>(), need(bj, "hi").get<Vec>()};
  int res = need(cfg, "resolution").get<int>();
  LandscapeSummary ls = critical_depth_grid(p, box, res);

  json out;
  out["d_star"] = ls.d_star;
  out["band"] = ls.band;
  out["witness_node"] = ls.witness_node;
  out["witness_point"] = ls.grid[ls.witness_node];
  out["good_path_radius_at_witness"] = ls.good_path_radius[ls.witness_node];
  art.add("landscape.json", out.dump(2) + "\n");

  std::ostringstream csv;
  for (int k = 0; k < p.dimension; ++k) csv << "x" << k << ",";
  csv << "v,h,depth\n";
  for (std::size_t i = 0; i < ls.grid.size(); ++i) {
    for (int k = 0; k < p.dimension; ++k) csv << fmt(ls.grid[i][k]) << ",";
    csv << fmt(ls.v[i]) << "," << fmt(ls.h[i]) << "," << fmt(ls.depth[i])
        << "\n";
  }
  art.add("profile.csv", csv.str());
}

void run_equilibrium(const json& cfg, Artifacts& art) {
  Potential p = potential_from(cfg);
  auto sigmas = need(cfg, "sigmas").get<std::vector<double>>();
  double tail_radius =
      cfg.contains("tail_radius") ? cfg.at("tail_radius").get<double>() : 0.2;

  json rows = json::array();
  for (double sigma : sigmas) {
    EquilibriumMeasure m = make_equilibrium(p, sigma);
    double lap = laplace_asymptote(p, sigma);
    json row;
    row["sigma"] = sigma;
    row["z"] = m.z;
    row["laplace_asymptote"] = lap;
    row["ratio"] = m.z / lap;
    if (p.dimension == 1) row["median"] = median(m);
    row["tail_mass"] = tail_mass(m, tail_radius);
    rows.push_back(row);
  }
  json out;
  out["tail_radius"] = tail_radius;
  out["rows"] = rows;
  art.add("equilibrium.json", out.dump(2) + "\n");
}

void run_simulate(const json& cfg, Artifacts& art, std::uint64_t seed,
                  int threads) {
  EnsembleRun run;
  run.potential = potential_from(cfg);
  run.schedule = schedule_from(cfg);
  run.n_traj = need(cfg, "n_traj").get<int>();
  run.t0 = need(cfg, "t0").get<double>();
  run.t_end = need(cfg, "t_end").get<double>();
  if (cfg.contains("dt0")) run.dt0 = cfg.at("dt0").get<double>();
  if (cfg.contains("dt_growth")) run.dt_growth = cfg.at("dt_growth").get<double>();
  if (cfg.contains("dt_max")) run.dt_max = cfg.at("dt_max").get<double>();
  run.seed = seed;

  const json& ij = need(cfg, "init");
  std::string kind = need(ij, "kind").get<std::string>();
  if (kind == "point") {
    run.init.kind = InitSampler::Kind::point;
    run.init.point = need(ij, "point").get<Vec>();
  } else if (kind == "uniform_box") {
    run.init.kind = InitSampler::Kind::uniform_box;
    run.init.box = Box{need(ij, "lo").get<Vec>(), need(ij, "hi").get<Vec>()};
  } else if (kind == "density1d") {
    run.init.kind = InitSampler::Kind::density1d;
    run.init.lo = need(ij, "lo").get<double>();
    run.init.hi = need(ij, "hi").get<double>();
    run.init.cell_weights = need(ij, "weights").get<std::vector<double>>();
  } else {
    throw ConfigError("init kind: " + kind);
  }

  auto record_times = record_times_from(cfg, run.t0, run.t_end);
  std::vector<double> radii;
  if (cfg.contains("radii")) radii = cfg.at("radii").get<std::vector<double>>();
  Histogram hist;
  if (cfg.contains("hist")) {
    hist.lo = need(cfg.at("hist"), "lo").get<double>();
    hist.hi = need(cfg.at("hist"), "hi").get<double>();
    hist.bins = need(cfg.at("hist"), "bins").get<int>();
  }

  ObservableSeries series =
      simulate_ensemble(run, record_times, radii, hist, threads);

  std::ostringstream csv;
  csv << "t,mean_V,mean_V2,se_V,se_V2";
  for (double r : radii) csv << ",success_r" << fmt(r);
  csv << "\n";
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    csv << fmt(series.times[k]) << "," << fmt(series.mean_v[k]) << ","
        << fmt(series.mean_v2[k]) << "," << fmt(series.se_v[k]) << ","
        << fmt(series.se_v2[k]);
    for (std::size_t r = 0; r < radii.size(); ++r)
      csv << "," << fmt(series.success[k][r]);
    csv << "\n";
  }
  art.add("simulate.csv", csv.str());

  if (run.potential.dimension == 1) {
    for (std::size_t k = 0; k < series.times.size(); ++k) {
      std::ostringstream hcsv;
      hcsv << "bin_center,mass\n";
      double bw = (hist.hi - hist.lo) / hist.bins;
      for (int b = 0; b < hist.bins; ++b)
        hcsv << fmt(hist.lo + (b + 0.5) * bw) << ","
             << fmt(series.hist[k][b]) << "\n";
      char name[32];
      std::snprintf(name, sizeof name, "hist_%04zu.csv", k);
      art.add(name, hcsv.str());
    }
  }

  json out;
  out["n_traj"] = series.n_traj;
  out["clamp_count"] = series.clamp_count;
  art.add("simulate.json", out.dump(2) + "\n");
}

std::vector<double> initial_density_from(const json& cfg, const Potential& p,
                                         const Schedule& s, double t0,
                                         const FpeGrid& grid) {
  const json& ij = need(cfg, "init");
  std::string kind = need(ij, "kind").get<std::string>();
  std::vector<double> m0;
  if (kind == "equilibrium") {
    double sigma = ij.contains("sigma") ? ij.at("sigma").get<double>()
                                        : sigma_at(s, t0).sigma;
    m0 = discretize_mu(p, sigma, grid);
  } else if (kind == "gaussian") {
    double mean = need(ij, "mean").get<double>();
    double sd = need(ij, "sd").get<double>();
    m0.resize(grid.n);
    double z = 0.0;
    for (int i = 0; i < grid.n; ++i) {
      double u = (grid.center(i) - mean) / sd;
      m0[i] = std::exp(-0.5 * u * u);
      z += m0[i] * grid.h();
    }
    for (double& mi : m0) mi /= z;
  } else if (kind == "cells") {
    m0 = need(ij, "weights").get<std::vector<double>>();
    if (static_cast<int>(m0.size()) != grid.n)
      throw ConfigError("init cells: weight count != grid.n");
    double z = 0.0;
    for (double mi : m0) z += mi * grid.h();
    if (z <= 0.0) throw ConfigError("init cells: zero mass");
    for (double& mi : m0) mi /= z;
  } else {
    throw ConfigError("init kind: " + kind);
  }
  return m0;
}

FpeGrid grid_from(const json& cfg) {
  const json& gj = need(cfg, "grid");
  FpeGrid grid;
  grid.lo = need(gj, "lo").get<double>();
  grid.hi = need(gj, "hi").get<double>();
  grid.n = need(gj, "n").get<int>();
  if (grid.n < 8 || grid.hi <= grid.lo) throw ConfigError("bad grid");
  return grid;
}

FpeOptions fpe_options_from(const json& cfg) {
  FpeOptions opt;
  if (cfg.contains("dt0")) opt.dt0 = cfg.at("dt0").get<double>();
  if (cfg.contains("dt_growth")) opt.dt_growth = cfg.at("dt_growth").get<double>();
  if (cfg.contains("dt_max")) opt.dt_max = cfg.at("dt_max").get<double>();
  return opt;
}

std::string fpe_csv(const Potential& p, const DensityTrajectory& traj) {
  auto mom = moment_curve(p, traj, 1);
  std::ostringstream csv;
  csv << "t,sigma,I,J,tv,mean_V\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k)
    csv << fmt(traj.times[k]) << "," << fmt(traj.sigma[k]) << ","
        << fmt(traj.I[k]) << "," << fmt(traj.J[k]) << "," << fmt(traj.tv[k])
        << "," << fmt(mom[k]) << "\n";
  return csv.str();
}

void run_fpe(const json& cfg, Artifacts& art) {
  Potential p = potential_from(cfg);
  if (p.dimension != 1) throw ConfigError("fpe: 1D potential required");
  Schedule s = schedule_from(cfg);
  FpeGrid grid = grid_from(cfg);
  double t0 = need(cfg, "t0").get<double>();
  double t_end = need(cfg, "t_end").get<double>();
  auto record_times = record_times_from(cfg, t0, t_end);
  auto m0 = initial_density_from(cfg, p, s, t0, grid);
  DensityTrajectory traj =
      evolve(p, s, m0, grid, t0, t_end, record_times, fpe_options_from(cfg));

  auto mom1 = moment_curve(p, traj, 1);
  auto mom2 = moment_curve(p, traj, 2);
  auto env2 = envelope_ratio(p, s, traj, 2);
  std::ostringstream csv;
  csv << "t,sigma,I,J,tv,meanV,meanV2,envelope_ratio_p2,prop5_residual\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    double resid = (k > 0 && k + 1 < traj.times.size())
                       ? entropy_derivative_residual(p, s, traj, k)
                       : 0.0;
    csv << fmt(traj.times[k]) << "," << fmt(traj.sigma[k]) << ","
        << fmt(traj.I[k]) << "," << fmt(traj.J[k]) << "," << fmt(traj.tv[k])
        << "," << fmt(mom1[k]) << "," << fmt(mom2[k]) << "," << fmt(env2[k])
        << "," << fmt(resid) << "\n";
  }
  art.add("fpe.csv", csv.str());
  json out;
  out["final_I"] = traj.I.back();
  out["final_tv"] = traj.tv.back();
  art.add("fpe.json", out.dump(2) + "\n");
}

std::function<double(double)> beta_from(const json& cfg) {
  if (!cfg.contains("beta")) return [](double) { return 1.0; };
  const json& bj = cfg.at("beta");
  std::string type = need(bj, "type").get<std::string>();
  if (type == "constant") return [](double) { return 1.0; };
  if (type == "power_tail")
    return beta_for_power_tail(need(bj, "alpha").get<double>());
  throw ConfigError("beta type: " + type);
}

double d_star_1d(const Potential& p, double lo, double hi, int n) {
  std::vector<double> nodes(n);
  for (int i = 0; i < n; ++i) nodes[i] = lo + (hi - lo) * i / (n - 1);
  return barrier_profile_1d(p, nodes).d_star;
}

void run_hardy(const json& cfg, Artifacts& art) {
  Potential p = potential_from(cfg);
  if (p.dimension != 1) throw ConfigError("hardy: 1D potential required");
  auto sigmas = need(cfg, "sigmas").get<std::vector<double>>();
  int grid_n = cfg.contains("grid_n") ? cfg.at("grid_n").get<int>() : 4000;
  auto beta = beta_from(cfg);

  // An explicit domain is needed for multi-well landscapes: the automatic
  // quadrature window tracks the dominant peak only and hides the barrier.
  double lo, hi;
  if (cfg.contains("domain")) {
    const json& d = cfg.at("domain");
    lo = need(d, "lo").get<double>();
    hi = need(d, "hi").get<double>();
    if (!(lo < hi)) throw ConfigError("hardy: domain.lo must be < domain.hi");
  } else {
    Box ref_box = quadrature_domain(p, sigmas.front());
    lo = ref_box.lo[0];
    hi = ref_box.hi[0];
  }
  double d_star = d_star_1d(p, lo, hi, 4001);

  json rows = json::array();
  for (std::size_t si = 0; si < sigmas.size(); ++si) {
    double sigma = sigmas[si];
    WpiReport rep = hardy_profile(p, sigma, beta, lo, hi, grid_n);
    json row;
    row["sigma"] = sigma;
    row["median"] = rep.median;
    row["log_B_sup"] = rep.log_B_sup;
    row["log_b_sup"] = rep.log_b_sup;
    row["sigma_log_B"] = sigma * rep.log_B_sup;
    row["d_star_reference"] = d_star;
    rows.push_back(row);

    std::ostringstream csv;
    csv << "x,log_B,log_b\n";
    for (std::size_t i = 0; i < rep.grid.size(); ++i)
      csv << fmt(rep.grid[i]) << "," << fmt(rep.log_B_profile[i]) << ","
          << fmt(rep.log_b_profile[i]) << "\n";
    char name[32];
    std::snprintf(name, sizeof name, "hardy_%04zu.csv", si);
    art.add(name, csv.str());
  }
  json out;
  out["rows"] = rows;
  art.add("hardy.json", out.dump(2) + "\n");
}

void run_capacity(const json& cfg, Artifacts& art) {
  Potential p = potential_from(cfg);
  if (p.dimension != 1) throw ConfigError("capacity: 1D potential required");
  auto sigmas = need(cfg, "sigmas").get<std::vector<double>>();
  const json& gj = need(cfg, "grid");
  double lo = need(gj, "lo").get<double>();
  double hi = need(gj, "hi").get<double>();
  int n = need(gj, "n").get<int>();
  std::string family_name = cfg.contains("family")
                                ? cfg.at("family").get<std::string>()
                                : std::string("intervals");
  CapacityFamily family;
  if (family_name == "intervals")
    family = CapacityFamily::intervals;
  else if (family_name == "sublevel_sets")
    family = CapacityFamily::sublevel_sets;
  else
    throw ConfigError("capacity family: " + family_name);

  json rows = json::array();
  for (double sigma : sigmas) {
    WeightedGraph g = graph_from_potential_1d(p, sigma, lo, hi, n);
    double kappa;
    if (cfg.contains("kappa")) {
      kappa = cfg.at("kappa").get<double>();
    } else {
      // Default: half the mass left outside the grounded dominant well.
      auto ground = default_ground(g);
      double mg = 0.0;
      for (int b : ground) mg += g.weight[b];
      kappa = 0.5 * std::max(1e-12, 1.0 - mg);
      kappa = std::min(kappa, 0.49);
    }
    double c_kappa = measure_capacity_constant(g, kappa, family);
    json row;
    row["sigma"] = sigma;
    row["kappa"] = kappa;
    row["C_kappa"] = c_kappa;
    row["sigma_log_inv_C"] = sigma * std::log(1.0 / c_kappa);
    row["family"] = family_name;  // enumerable family: upper bound on C_kappa
    rows.push_back(row);
  }
  json out;
  out["rows"] = rows;
  art.add("capacity.json", out.dump(2) + "\n");
}

void run_verify(const json& cfg, Artifacts& art, std::uint64_t seed) {
  Potential p = potential_from(cfg);
  if (p.dimension != 1) throw ConfigError("verify: 1D potential required");
  double sigma = need(cfg, "sigma").get<double>();
  const json& gj = need(cfg, "grid");
  double lo = need(gj, "lo").get<double>();
  double hi = need(gj, "hi").get<double>();
  int n = need(gj, "n").get<int>();
  double kappa = need(cfg, "kappa").get<double>();
  int corpus = cfg.contains("corpus_size") ? cfg.at("corpus_size").get<int>()
                                           : 1000;

  WeightedGraph g = graph_from_potential_1d(p, sigma, lo, hi, n);
  double c_kappa = measure_capacity_constant(g, kappa, CapacityFamily::intervals);
  OnePointPair op = one_point_from_capacity(kappa, c_kappa);

  json suites;
  auto record = [&suites](const std::string& name, const VerifyResult& r,
                          int trials) {
    json s;
    s["trials"] = trials;
    s["violations"] = r.violations;
    s["worst_margin"] = r.worst_margin;
    s["pass"] = r.violations == 0;
    suites[name] = s;
  };
  record("one_point_linf",
         one_point_verify(g, op.linf.first, op.linf.second, OnePointNorm::linf,
                          corpus, seed),
         corpus);
  record("one_point_orlicz",
         one_point_verify(g, op.orlicz.first, op.orlicz.second,
                          OnePointNorm::orlicz, corpus, seed + 1),
         corpus);

  // Entropy / Orlicz inequality suites on random discrete measures.
  VerifyResult l30, l31, ind;
  l30.worst_margin = l31.worst_margin = ind.worst_margin = kInf;
  for (int trial = 0; trial < corpus; ++trial) {
    Rng rng(seed + 2, static_cast<std::uint64_t>(trial));
    int m = 8 + static_cast<int>(rng.uniform() * 56);
    DiscreteMeasure mu;
    mu.weights.resize(m);
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
      double u = rng.uniform();
      mu.weights[i] = u * u + 1e-6;
      z += mu.weights[i];
    }
    for (double& w : mu.weights) w /= z;
    std::vector<double> f(m);
    for (int i = 0; i < m; ++i)
      f[i] = std::abs(rng.normal()) * std::pow(10.0, rng.uniform(-1.0, 1.0));

    auto [lhs30, rhs30] = orlicz_entropy_bound(mu, f);
    l30.worst_margin = std::min(l30.worst_margin, rhs30 - lhs30);
    if (lhs30 > rhs30 * (1.0 + 1e-10)) ++l30.violations;

    auto [lhs31, rhs31] = centered_entropy_bound(mu, f);
    l31.worst_margin = std::min(l31.worst_margin, rhs31 - lhs31);
    if (lhs31 > rhs31 * (1.0 + 1e-10) + 1e-13) ++l31.violations;

    // Indicator Luxembourg norm against psi_hat of its mass.
    int cut = 1 + static_cast<int>(rng.uniform() * (m - 1));
    std::vector<double> ind_f(m, 0.0);
    double mass = 0.0;
    for (int i = 0; i < cut; ++i) {
      ind_f[i] = 1.0;
      mass += mu.weights[i];
    }
    if (mass > 0.0 && mass < 1.0) {
      double err = std::abs(luxembourg_norm(ind_f, mu, Young::psi_star) -
                            psi_hat(mass));
      ind.worst_margin = std::min(ind.worst_margin, 1e-8 - err);
      if (err > 1e-8) ++ind.violations;
    }
  }
  record("orlicz_entropy", l30, corpus);
  record("centered_entropy", l31, corpus);
  record("indicator_norm", ind, corpus);

  json out;
  out["sigma"] = sigma;
  out["kappa"] = kappa;
  out["C_kappa"] = c_kappa;
  out["suites"] = suites;
  bool all_pass = true;
  for (const auto& [name, s] : suites.items()) {
    (void)name;
    all_pass = all_pass && s.at("pass").get<bool>();
  }
  out["pass"] = all_pass;
  art.add("verify.json", out.dump(2) + "\n");
}

void run_dichotomy(const json& cfg, Artifacts& art) {
  Potential p = potential_from(cfg);
  if (p.dimension != 1) throw ConfigError("dichotomy: 1D potential required");
  FpeGrid grid = grid_from(cfg);
  double t0 = need(cfg, "t0").get<double>();
  double t_end = need(cfg, "t_end").get<double>();
  double super_factor = cfg.contains("super_factor")
                            ? cfg.at("super_factor").get<double>()
                            : 2.0;
  double sub_factor =
      cfg.contains("sub_factor") ? cfg.at("sub_factor").get<double>() : 0.3;
  double t_offset = cfg.contains("t_offset")
                        ? cfg.at("t_offset").get<double>()
                        : std::exp(1.0);

  double d_star = d_star_1d(p, grid.lo, grid.hi, 4001);
  auto [split, false_left] = well_split(p, grid.lo, grid.hi);

  Schedule s_super{ScheduleKind::logarithmic, super_factor * d_star, t_offset,
                   0.0};
  Schedule s_sub{ScheduleKind::logarithmic, sub_factor * d_star, t_offset, 0.0};

  // m0: equilibrium at the initial (super) temperature conditioned to the
  // false well.
  double sigma0 = sigma_at(s_super, t0).sigma;
  std::vector<double> m0 = discretize_mu(p, sigma0, grid);
  double mass = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    double x = grid.center(i);
    bool in_false = false_left ? (x < split) : (x >= split);
    if (!in_false) m0[i] = 0.0;
    mass += m0[i] * grid.h();
  }
  if (mass <= 0.0) throw std::runtime_error("dichotomy: empty false well");
  for (double& mi : m0) mi /= mass;

  auto record_times = record_times_from(cfg, t0, t_end);
  FpeOptions opt = fpe_options_from(cfg);
  DensityTrajectory super_traj =
      evolve(p, s_super, m0, grid, t0, t_end, record_times, opt);
  DensityTrajectory sub_traj =
      evolve(p, s_sub, m0, grid, t0, t_end, record_times, opt);

  art.add("dichotomy_super.csv", fpe_csv(p, super_traj));
  art.add("dichotomy_sub.csv", fpe_csv(p, sub_traj));

  std::size_t last = super_traj.times.size() - 1;
  json out;
  out["d_star"] = d_star;
  out["c_super"] = s_super.c;
  out["c_sub"] = s_sub.c;
  out["barrier_x"] = split;
  out["mass_true_well_super"] = side_mass(super_traj, last, split, !false_left);
  out["mass_true_well_sub"] = side_mass(sub_traj, last, split, !false_left);
  out["mass_false_well_sub"] = side_mass(sub_traj, last, split, false_left);
  out["I_initial_super"] = super_traj.I.front();
  out["I_final_super"] = super_traj.I.back();
  art.add("dichotomy.json", out.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"annealing diffusion laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t cli_seed = 0;
  bool seed_set = false;
  int threads = 1;

  const std::vector<std::string> names = {"landscape", "equilibrium",
                                          "simulate",  "fpe",
                                          "hardy",     "capacity",
                                          "verify",    "dichotomy"};
  for (const auto& name : names) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--seed", cli_seed, "seed override")
        ->each([&seed_set](const std::string&) { seed_set = true; });
    sub->add_option("--threads", threads, "worker threads");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string command = app.get_subcommands().front()->get_name();

  json cfg;
  json manifest;
  try {
    cfg = load_config(config_path);
    manifest["version"] = kVersion;
    manifest["command"] = command;
    manifest["config_hash"] = fnv1a_hex(cfg.dump());
    manifest["status"] = "ok";
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }

  Artifacts art{fs::path(out_dir)};
  try {
    if (command == "landscape") {
      run_landscape(cfg, art);
    } else if (command == "equilibrium") {
      run_equilibrium(cfg, art);
    } else if (command == "simulate") {
      run_simulate(cfg, art, seed_from(cfg, cli_seed, seed_set), threads);
    } else if (command == "fpe") {
      run_fpe(cfg, art);
    } else if (command == "hardy") {
      run_hardy(cfg, art);
    } else if (command == "capacity") {
      run_capacity(cfg, art);
    } else if (command == "verify") {
      run_verify(cfg, art, seed_from(cfg, cli_seed, seed_set));
    } else if (command == "dichotomy") {
      run_dichotomy(cfg, art);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    art.write_failure_manifest(manifest, e.what());
    return 3;
  }

  try {
    art.write_all(manifest);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "write failure: %s\n", e.what());
    return 3;
  }
  return 0;
}
