#include "anneal/wpi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "anneal/equilibrium.hpp"
#include "anneal/numerics.hpp"
#include "anneal/orlicz.hpp"

namespace anneal {
namespace {

double safe_exp(double x) {
  if (x > 700.0) return kInf;
  if (x < -745.0) return 0.0;
  return std::exp(x);
}

}  // namespace

WpiReport hardy_profile(const Potential& p, double sigma,
                        const std::function<double(double)>& beta, double lo,
                        double hi, int n) {
  if (p.dimension != 1)
    throw std::invalid_argument("hardy_profile: 1D potential required");
  if (n < 16 || hi <= lo) throw std::invalid_argument("hardy_profile: bad grid");
  if (sigma <= 0.0) throw std::invalid_argument("hardy_profile: sigma <= 0");

  WpiReport rep;
  rep.sigma = sigma;
  rep.base_beta = beta;
  double h = (hi - lo) / n;
  double log_h = std::log(h);
  double log_z = std::log(partition_function(p, sigma));

  rep.grid.resize(n);
  std::vector<double> phi(n);
  for (int i = 0; i < n; ++i) {
    rep.grid[i] = lo + (i + 0.5) * h;
    phi[i] = p.value1(rep.grid[i]) / sigma + log_z;
  }

  // Prefix/suffix masses of mu_sigma (density e^{-Phi}), in log space.
  std::vector<double> log_head(n), log_tail(n);
  double acc = -kInf;
  for (int i = 0; i < n; ++i) {
    acc = log_add(acc, -phi[i] + log_h);
    log_head[i] = acc;
  }
  acc = -kInf;
  for (int i = n - 1; i >= 0; --i) {
    acc = log_add(acc, -phi[i] + log_h);
    log_tail[i] = acc;
  }

  int im = 0;
  while (im + 1 < n && safe_exp(log_head[im]) < 0.5) ++im;
  rep.median = rep.grid[im];

  rep.B_profile.assign(n, 0.0);
  rep.b_profile.assign(n, 0.0);
  rep.log_B_profile.assign(n, -kInf);
  rep.log_b_profile.assign(n, -kInf);
  rep.log_B_sup = -kInf;
  rep.log_b_sup = -kInf;

  auto log_beta_at = [&](double mass) {
    double m = std::clamp(mass, 1e-300, 1.0 - 1e-15);
    double bv = beta(m);
    if (!(bv > 0.0)) throw std::invalid_argument("hardy_profile: beta <= 0");
    return std::log(bv);
  };

  double log_e = -kInf;  // running log int_m^x e^Phi
  for (int i = im; i < n; ++i) {
    log_e = log_add(log_e, phi[i] + log_h);
    double lb = log_e + log_tail[i] - log_beta_at(safe_exp(log_tail[i]));
    rep.log_B_profile[i] = lb;
    rep.B_profile[i] = safe_exp(lb);
    rep.log_B_sup = std::max(rep.log_B_sup, lb);
  }
  log_e = -kInf;
  for (int i = im; i >= 0; --i) {
    log_e = log_add(log_e, phi[i] + log_h);
    double lb = log_e + log_head[i] - log_beta_at(safe_exp(log_head[i]));
    rep.log_b_profile[i] = lb;
    rep.b_profile[i] = safe_exp(lb);
    rep.log_b_sup = std::max(rep.log_b_sup, lb);
  }
  rep.B_sup = safe_exp(rep.log_B_sup);
  rep.b_sup = safe_exp(rep.log_b_sup);
  if (!std::isfinite(rep.log_B_sup) || !std::isfinite(rep.log_b_sup))
    throw std::runtime_error("hardy_profile: profile overflow in log space");
  return rep;
}

std::function<double(double)> beta_for_power_tail(double alpha) {
  if (alpha <= 0.0 || alpha > 1.0)
    throw std::invalid_argument("beta_for_power_tail: alpha outside (0, 1]");
  double expo = 4.0 / alpha - 4.0;
  return [expo](double s) {
    double sc = std::min(s, 0.5);  // tails beyond mass 1/2 are never probed
    sc = std::max(sc, 1e-300);
    return std::pow(std::log(1.0 / sc), expo);
  };
}

WpiReport compensating_functions(WpiReport report, double d_star,
                                 double c_univ) {
  report.d_star_ref = d_star;
  double log_scale = std::log(12.0) + std::max(report.log_B_sup, report.log_b_sup);
  auto base = report.base_beta;
  report.beta_fn = [log_scale, base](double s) {
    return safe_exp(log_scale + std::log(base(std::max(s, 1e-300))));
  };
  auto beta_fn = report.beta_fn;
  report.alpha_fn = [beta_fn, c_univ](double r) {
    if (r <= 0.0) throw std::invalid_argument("alpha_fn: r <= 0");
    double s = 0.25 * psi_hat_inv(0.5 * r);
    return (c_univ / 4.0) * beta_fn(s);
  };
  return report;
}

OnePointPair one_point_from_capacity(double kappa, double c_kappa) {
  if (kappa <= 0.0 || kappa >= 0.5)
    throw std::invalid_argument("one_point_from_capacity: kappa outside (0, 1/2)");
  if (c_kappa <= 0.0)
    throw std::invalid_argument("one_point_from_capacity: C_kappa <= 0");
  OnePointPair out;
  out.linf = {kappa, 12.0 / c_kappa};
  // The proof's final bound carries a factor 2 on psi_hat(kappa).
  out.orlicz = {2.0 * psi_hat(kappa), 12.0 / c_kappa};
  return out;
}

VerifyResult one_point_verify(const WeightedGraph& g, double r, double c_r,
                              OnePointNorm norm, int corpus_size,
                              std::uint64_t seed) {
  if (r <= 0.0 || c_r <= 0.0)
    throw std::invalid_argument("one_point_verify: (r, c_r) must be positive");
  std::size_t n = g.weight.size();
  std::vector<std::vector<int>> adj(n);
  for (const auto& e : g.edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  DiscreteMeasure mu{g.weight};

  VerifyResult res;
  res.worst_margin = kInf;
  std::vector<double> f(n), tmp(n), centered(n);
  for (int trial = 0; trial < corpus_size; ++trial) {
    Rng rng(seed, static_cast<std::uint64_t>(trial));
    for (std::size_t k = 0; k < n; ++k) f[k] = rng.normal();
    // Mix rough and smoothed fields; smoothing passes are neighbor averages.
    int passes = trial % 5 == 0 ? 0 : 1 + static_cast<int>(rng.uniform() * 10);
    for (int pass = 0; pass < passes; ++pass) {
      for (std::size_t k = 0; k < n; ++k) {
        double s = f[k];
        for (int w : adj[k]) s += f[w];
        tmp[k] = s / (1.0 + adj[k].size());
      }
      f.swap(tmp);
    }
    double scale = std::pow(10.0, rng.uniform(-1.0, 2.0));
    double shift = rng.uniform(-2.0, 2.0);
    for (std::size_t k = 0; k < n; ++k) f[k] = scale * f[k] + shift;

    double m = mean(mu, f), m2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) m2 += mu.weights[k] * f[k] * f[k];
    double var = std::max(0.0, m2 - m * m);
    double energy = dirichlet_energy(g, f);
    double n2;
    if (norm == OnePointNorm::linf) {
      double fmin = f[0], fmax = f[0];
      for (double fv : f) {
        fmin = std::min(fmin, fv);
        fmax = std::max(fmax, fv);
      }
      n2 = (fmax - fmin) * (fmax - fmin);
    } else {
      double med = lower_median(mu, f);
      for (std::size_t k = 0; k < n; ++k) centered[k] = f[k] - med;
      double lux = luxembourg_norm(centered, mu, Young::phi);
      n2 = lux * lux;
    }
    double rhs = c_r * energy + r * n2;
    double margin = rhs - var;
    res.worst_margin = std::min(res.worst_margin, margin);
    if (var > rhs * (1.0 + 1e-10) + 1e-13) ++res.violations;
  }
  return res;
}

std::vector<CriticalRateRow> critical_rate_check(
    const Potential& p, const Schedule& s, const std::vector<double>& sigmas,
    const std::function<double(double)>& beta, double d_star, int grid_n) {
  if (sigmas.size() < 3)
    throw std::invalid_argument("critical_rate_check: need >= 3 sigmas");
  for (std::size_t i = 1; i < sigmas.size(); ++i)
    if (sigmas[i] >= sigmas[i - 1])
      throw std::invalid_argument("critical_rate_check: sigmas must decrease");
  if (s.kind != ScheduleKind::logarithmic)
    throw std::invalid_argument("critical_rate_check: logarithmic schedule only");

  std::vector<CriticalRateRow> rows;
  for (double sigma : sigmas) {
    double log_t = s.c / sigma;  // sigma(t) = sigma at ln(t + offset) = c/sigma
    if (log_t > 700.0)
      throw std::invalid_argument("critical_rate_check: sigma too small for rate");
    double t = std::exp(log_t) - s.t_offset;
    TuningPair tuning = tuning_parameters(t, default_entropy_constant());

    Box dom = quadrature_domain(p, sigma);
    WpiReport rep = hardy_profile(p, sigma, beta, dom.lo[0], dom.hi[0], grid_n);
    rep = compensating_functions(std::move(rep), d_star);

    double ss = 0.25 * psi_hat_inv(0.5 * tuning.r);
    double log_alpha = std::log(12.0 / 4.0) + std::log(12.0) +
                       std::max(rep.log_B_sup, rep.log_b_sup) +
                       std::log(beta(std::max(ss, 1e-300)));
    rows.push_back({sigma, tuning.r, safe_exp(log_alpha), sigma * log_alpha});
  }
  return rows;
}

}  // namespace anneal
