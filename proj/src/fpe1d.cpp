#include "anneal/fpe1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "anneal/numerics.hpp"

namespace anneal {
namespace {

// Bernoulli function z / (e^z - 1).
double bernoulli(double z) {
  if (std::abs(z) < 1e-8) return 1.0 - 0.5 * z + z * z / 12.0;
  if (z > 700.0) return 0.0;
  if (z < -700.0) return -z;
  return z / std::expm1(z);
}

struct Diagnostics {
  double I, J, tv;
  std::vector<double> f;
};

Diagnostics diagnostics(const std::vector<double>& m,
                        const std::vector<double>& mu, double h) {
  Diagnostics d;
  d.I = d.J = d.tv = 0.0;
  d.f.resize(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    d.f[i] = mu[i] > 1e-300 ? m[i] / mu[i] : 0.0;
    if (m[i] > 1e-300 && mu[i] > 1e-300)
      d.I += h * m[i] * std::log(m[i] / mu[i]);
    double l = std::log(M_E + d.f[i]);
    d.J += h * mu[i] * d.f[i] * l * l;
    d.tv += 0.5 * h * std::abs(m[i] - mu[i]);
  }
  return d;
}

}  // namespace

std::vector<double> discretize_mu(const Potential& p, double sigma,
                                  const FpeGrid& grid) {
  std::vector<double> v(grid.n), mu(grid.n);
  double vmin = kInf;
  for (int i = 0; i < grid.n; ++i) {
    v[i] = p.value1(grid.center(i));
    vmin = std::min(vmin, v[i]);
  }
  double z = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    mu[i] = std::exp(-(v[i] - vmin) / sigma);
    z += mu[i] * grid.h();
  }
  for (int i = 0; i < grid.n; ++i) mu[i] /= z;
  return mu;
}

DensityTrajectory evolve(const Potential& p, const Schedule& s,
                         const std::vector<double>& m0, const FpeGrid& grid,
                         double t0, double t_end,
                         const std::vector<double>& record_times,
                         const FpeOptions& opt) {
  const int n = grid.n;
  const double h = grid.h();
  if (static_cast<int>(m0.size()) != n)
    throw std::invalid_argument("evolve: m0/grid size mismatch");
  {
    double mass = 0.0;
    for (double mi : m0) {
      if (mi < 0.0) throw std::invalid_argument("evolve: m0 negative");
      mass += mi * h;
    }
    if (std::abs(mass - 1.0) > 1e-8)
      throw std::invalid_argument("evolve: m0 not unit mass");
  }
  for (std::size_t i = 0; i < record_times.size(); ++i) {
    if (record_times[i] < t0 - 1e-12 || record_times[i] > t_end + 1e-12)
      throw std::invalid_argument("evolve: record time outside [t0, t_end]");
    if (i > 0 && record_times[i] <= record_times[i - 1])
      throw std::invalid_argument("evolve: record times not sorted");
  }

  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = p.value1(grid.center(i));

  DensityTrajectory traj;
  traj.grid = grid;

  std::vector<double> m = m0;
  std::vector<double> lower(n), diag(n), upper(n);

  auto record = [&](double t) {
    double sig = sigma_at(s, t).sigma;
    auto mu = discretize_mu(p, sig, grid);
    Diagnostics d = diagnostics(m, mu, h);
    traj.times.push_back(t);
    traj.sigma.push_back(sig);
    traj.m.push_back(m);
    traj.f.push_back(std::move(d.f));
    traj.I.push_back(d.I);
    traj.J.push_back(d.J);
    traj.tv.push_back(d.tv);
  };

  std::size_t next_rec = 0;
  double t = t0;
  if (next_rec < record_times.size() &&
      std::abs(record_times[next_rec] - t0) <= 1e-12) {
    record(t0);
    ++next_rec;
  }

  double dt_cur = opt.dt0;
  while (t < t_end - 1e-12) {
    double sig_now = sigma_at(s, t).sigma;
    double dt = std::min({dt_cur, opt.dt_max,
                          opt.cfl_safety * h * h / std::max(sig_now, 1e-12)});
    bool hit_record = false;
    if (next_rec < record_times.size() && t + dt >= record_times[next_rec] - 1e-12) {
      dt = record_times[next_rec] - t;
      hit_record = true;
    }
    if (t + dt > t_end) dt = t_end - t;
    if (dt <= 0.0) {
      if (hit_record) {
        record(t);
        ++next_rec;
      }
      continue;
    }

    double sig = sigma_at(s, t + 0.5 * dt).sigma;
    double k = sig / (2.0 * h * h);

    // Exponentially fitted (Scharfetter-Gummel) fluxes: w at the face
    // between i and i+1 is (V_i - V_{i+1})/sigma, which makes the
    // discretized mu_sigma exactly stationary at constant sigma.
    for (int i = 0; i < n; ++i) {
      double a_up = 0.0, a_lo = 0.0, a_di = 0.0;
      if (i + 1 < n) {
        double w = (v[i] - v[i + 1]) / sig;
        a_up = k * bernoulli(w);
        a_di -= k * bernoulli(-w);
      }
      if (i > 0) {
        double w = (v[i - 1] - v[i]) / sig;
        a_lo = k * bernoulli(-w);
        a_di -= k * bernoulli(w);
      }
      diag[i] = 1.0 - dt * a_di;
      upper[i] = -dt * a_up;
      lower[i] = -dt * a_lo;
    }

    m = solve_tridiagonal(lower, diag, upper, m);
    for (int i = 0; i < n; ++i) {
      if (m[i] < -1e-12)
        throw std::runtime_error("evolve: negative density (scheme violation)");
      if (m[i] < 0.0) m[i] = 0.0;
    }

    t += dt;
    if (hit_record) {
      record(t);
      ++next_rec;
    }
    dt_cur = std::min(dt_cur * opt.dt_growth, opt.dt_max);
  }
  if (next_rec < record_times.size()) record(t_end);
  return traj;
}

const std::vector<double>& free_energy_series(const DensityTrajectory& traj) {
  return traj.I;
}

const std::vector<double>& pseudo_entropy_series(const DensityTrajectory& traj) {
  return traj.J;
}

double entropy_derivative_residual(const Potential& p, const Schedule& s,
                                   const DensityTrajectory& traj,
                                   std::size_t idx) {
  if (idx == 0 || idx + 1 >= traj.times.size())
    throw std::invalid_argument("entropy_derivative_residual: need interior index");
  const double h = traj.grid.h();
  double didt = (traj.I[idx + 1] - traj.I[idx - 1]) /
                (traj.times[idx + 1] - traj.times[idx - 1]);

  double t = traj.times[idx];
  SigmaValue sv = sigma_at(s, t);
  auto mu = discretize_mu(p, sv.sigma, traj.grid);
  const auto& f = traj.f[idx];

  double vterm = 0.0;
  for (int i = 0; i < traj.grid.n; ++i)
    vterm += h * mu[i] * p.value1(traj.grid.center(i)) * (1.0 - f[i]);

  double energy = 0.0;
  for (int i = 0; i + 1 < traj.grid.n; ++i) {
    double g = (std::sqrt(f[i + 1]) - std::sqrt(f[i])) / h;
    energy += g * g * 0.5 * (mu[i] + mu[i + 1]) * h;
  }

  // dI/dt = (sigma'/sigma^2) int V (1-f) dmu - 2 sigma int |grad sqrt f|^2 dmu,
  // and sigma'/sigma^2 = -d(1/sigma)/dt.
  double rhs = -sv.d_inv_sigma_dt * vterm - 2.0 * sv.sigma * energy;
  return std::abs(didt - rhs) / (1.0 + std::abs(rhs));
}

std::vector<double> moment_curve(const Potential& p,
                                 const DensityTrajectory& traj, int exponent) {
  if (exponent != 1 && exponent != 2)
    throw std::invalid_argument("moment_curve: p in {1,2}");
  const double h = traj.grid.h();
  std::vector<double> out(traj.times.size(), 0.0);
  for (std::size_t k = 0; k < traj.times.size(); ++k)
    for (int i = 0; i < traj.grid.n; ++i) {
      double vv = p.value1(traj.grid.center(i));
      out[k] += h * traj.m[k][i] * (exponent == 1 ? vv : vv * vv);
    }
  return out;
}

std::vector<double> envelope_ratio(const Potential& p, const Schedule& s,
                                   const DensityTrajectory& traj, int exponent) {
  auto mom = moment_curve(p, traj, exponent);
  std::vector<double> out(mom.size());
  for (std::size_t k = 0; k < mom.size(); ++k) {
    double t = traj.times[k];
    double lt = std::log(t), llt = lt > 1.0 ? std::log(lt) : 0.0;
    if (llt <= 0.0) {
      out[k] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double sig = sigma_at(s, t).sigma;
    double env = std::pow(sig * lt, exponent) * std::pow(llt, 3.0 * exponent);
    out[k] = mom[k] / env;
  }
  return out;
}

double ball_mass(const DensityTrajectory& traj, std::size_t time_index,
                 double center, double radius) {
  const double h = traj.grid.h();
  double mass = 0.0;
  for (int i = 0; i < traj.grid.n; ++i)
    if (std::abs(traj.grid.center(i) - center) <= radius)
      mass += h * traj.m[time_index][i];
  return mass;
}

}  // namespace anneal
