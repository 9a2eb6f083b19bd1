#include "anneal/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "anneal/numerics.hpp"

namespace anneal {
namespace {

double psi_prime(double x) { return std::log1p(x) + x / (1.0 + x); }

double young_eval(Young which, double t) {
  switch (which) {
    case Young::psi:
      return psi(t);
    case Young::phi:
      return phi(t);
    case Young::psi_star:
      return psi_star(t);
  }
  return 0.0;
}

}  // namespace

double psi(double x) {
  if (x < 0.0) throw std::invalid_argument("psi: x < 0");
  return x * std::log1p(x);
}

double phi(double x) { return psi(x * x); }

double psi_star(double y) {
  if (y <= 0.0) return 0.0;
  if (y > 690.0) return kInf;  // maximizer ~ e^(y-1) overflows anyway
  // Maximizer solves psi'(x) = y; Newton from x ~ e^(y-1) with psi'
  // increasing, psi'' = (2+x)/(1+x)^2.
  double x = std::max(std::exp(std::min(y, 690.0) - 1.0) - 1.0, 1e-12);
  for (int i = 0; i < 60; ++i) {
    double g = psi_prime(x) - y;
    double g2 = (2.0 + x) / ((1.0 + x) * (1.0 + x));
    double step = g / g2;
    double xn = x - step;
    if (xn <= 0.0) xn = 0.5 * x;
    x = xn;
    if (std::abs(step) <= 1e-14 * (1.0 + x)) break;
  }
  return x * y - psi(x);
}

double psi_star_inv(double z) {
  if (z <= 0.0) return 0.0;
  double hi = 1.0;
  while (psi_star(hi) < z && hi < 700.0) hi *= 2.0;
  return bisect_increasing(psi_star, 0.0, hi, z, 1e-13);
}

double psi_hat(double x) {
  if (x <= 0.0 || x >= 1.0) throw std::invalid_argument("psi_hat: x outside (0,1)");
  return 1.0 / psi_star_inv(1.0 / x);
}

double psi_hat_inv(double y) {
  if (y <= 0.0) throw std::invalid_argument("psi_hat_inv: y <= 0");
  double lo = 1e-300, hi = 1.0 - 1e-12;
  if (psi_hat(hi) <= y) return hi;  // clamp: psi_hat maps (0,1) onto (0, ~0.63)
  return bisect_increasing([](double x) { return psi_hat(x); }, lo, hi, y, 1e-13);
}

double luxembourg_norm(const std::vector<double>& f, const DiscreteMeasure& mu,
                       Young which) {
  double fmax = 0.0;
  for (double v : f) fmax = std::max(fmax, std::abs(v));
  if (fmax == 0.0) return 0.0;

  auto total = [&](double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      s += mu.weights[i] * young_eval(which, std::abs(f[i]) / lambda);
    return s;
  };

  // total is decreasing in lambda; bracket the level set total = 1.
  double hi = fmax;
  while (total(hi) > 1.0) hi *= 2.0;
  double lo = hi;
  while (total(lo) < 1.0 && lo > 1e-300) lo *= 0.5;
  for (int i = 0; i < 120; ++i) {
    double mid = 0.5 * (lo + hi);
    if (total(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-12 * hi) break;
  }
  return 0.5 * (lo + hi);
}

double lower_median(const DiscreteMeasure& mu, const std::vector<double>& f) {
  std::vector<std::size_t> order(f.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
  double acc = 0.0;
  for (std::size_t k : order) {
    acc += mu.weights[k];
    if (acc >= 0.5 - 1e-15) return f[k];
  }
  return f[order.back()];
}

double mean(const DiscreteMeasure& mu, const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += mu.weights[i] * f[i];
  return s;
}

double entropy_of(const DiscreteMeasure& mu, const std::vector<double>& g) {
  double s = 0.0, e = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double w = mu.weights[i];
    s += w * g[i];
    if (g[i] > 1e-300) e += w * g[i] * std::log(g[i]);
  }
  if (s > 1e-300) e -= s * std::log(s);
  return e;
}

EntropyTriple entropy_functionals(const DiscreteMeasure& mu,
                                  const std::vector<double>& f) {
  EntropyTriple t{};
  std::vector<double> f2(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] < 0.0) throw std::invalid_argument("entropy_functionals: f < 0");
    f2[i] = f[i] * f[i];
  }
  t.ent = entropy_of(mu, f2);
  double m = mean(mu, f);
  double m2 = mean(mu, f2);
  t.var = std::max(0.0, m2 - m * m);
  double norm1 = m2;  // ||f^2||_1
  t.psent = 0.0;
  if (norm1 > 1e-300) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      double l = std::log(M_E + f2[i] / norm1);
      t.psent += mu.weights[i] * f2[i] * l * l;
    }
  }
  return t;
}

std::pair<double, double> orlicz_entropy_bound(const DiscreteMeasure& mu,
                                        const std::vector<double>& f) {
  for (double v : f)
    if (v < 0.0) throw std::invalid_argument("orlicz_entropy_bound: f < 0");
  double m = lower_median(mu, f);
  std::vector<double> centered(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) centered[i] = f[i] - m;
  double lhs = luxembourg_norm(centered, mu, Young::phi);
  lhs *= lhs;
  std::vector<double> f2(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) f2[i] = f[i] * f[i];
  double rhs = orlicz_entropy_constant() *
               (entropy_of(mu, f2) + 3.0 * mean(mu, f2));
  return {lhs, rhs};
}

std::pair<double, double> centered_entropy_bound(const DiscreteMeasure& mu,
                                        const std::vector<double>& f) {
  double mf = mean(mu, f);
  std::vector<double> t2(f.size()), f2(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    double d = f[i] - mf;
    t2[i] = d * d;
    f2[i] = f[i] * f[i];
  }
  return {entropy_of(mu, t2), entropy_of(mu, f2) + mean(mu, f2)};
}

double entropy_split_gap(const DiscreteMeasure& mu, const std::vector<double>& f,
                  double delta) {
  if (delta <= 0.0) throw std::invalid_argument("entropy_split_gap: delta <= 0");
  EntropyTriple t = entropy_functionals(mu, f);
  std::vector<double> f2(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) f2[i] = f[i] * f[i];
  if (std::abs(mean(mu, f2) - 1.0) > 1e-9)
    throw std::invalid_argument("entropy_split_gap: mu(f^2) != 1");
  return t.var / delta + 4.0 * delta * t.psent - t.ent;
}

double orlicz_entropy_constant() {
  double c_med = 1.0 / (1.0 - std::sqrt(5.0 / 8.0));
  return 1.5 * c_med * c_med;
}

}  // namespace anneal
