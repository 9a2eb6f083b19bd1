#include "anneal/equilibrium.hpp"

#include <cmath>
#include <stdexcept>

#include "anneal/numerics.hpp"

namespace anneal {
namespace {

// The integrand is a sharp peak at the argmin; integrating each side of the
// peak separately keeps the adaptive rule from missing it entirely.
double peaked_integral_1d(const std::function<double(double)>& f, double lo,
                          double hi, double peak, double width, double tol) {
  double w = std::min(width, 0.25 * (hi - lo));
  double a = std::max(lo, peak - w), b = std::min(hi, peak + w);
  double total = integrate(f, a, b, tol);
  if (a > lo) total += integrate(f, lo, a, tol);
  if (b < hi) total += integrate(f, b, hi, tol);
  return total;
}

double peak_width(const Potential& p, double sigma) {
  double lam = p.hessian_at_min[0];
  for (int i = 1; i < p.dimension; ++i)
    lam = std::min(lam, p.hessian_at_min[i * p.dimension + i]);
  return 8.0 * std::sqrt(sigma / std::max(lam, 1e-12));
}

}  // namespace

Box quadrature_domain(const Potential& p, double sigma) {
  if (p.dimension > 2)
    throw std::invalid_argument("quadrature_domain: d <= 2 only");
  double half = 1.0;
  const double v_cut = -sigma * std::log(1e-16);  // exp(-V/sigma) < 1e-16
  for (int iter = 0; iter < 60; ++iter) {
    bool ok = true;
    if (p.dimension == 1) {
      ok = p.value({p.argmin[0] - half}) > v_cut &&
           p.value({p.argmin[0] + half}) > v_cut;
    } else {
      for (int i = 0; i <= 32 && ok; ++i) {
        double t = -half + 2.0 * half * i / 32.0;
        ok = p.value({p.argmin[0] + t, p.argmin[1] - half}) > v_cut &&
             p.value({p.argmin[0] + t, p.argmin[1] + half}) > v_cut &&
             p.value({p.argmin[0] - half, p.argmin[1] + t}) > v_cut &&
             p.value({p.argmin[0] + half, p.argmin[1] + t}) > v_cut;
      }
    }
    if (ok) break;
    half *= 2.0;
  }
  Box box;
  box.lo.resize(p.dimension);
  box.hi.resize(p.dimension);
  for (int k = 0; k < p.dimension; ++k) {
    box.lo[k] = p.argmin[k] - half;
    box.hi[k] = p.argmin[k] + half;
  }
  return box;
}

double partition_function(const Potential& p, double sigma) {
  return partition_function(p, sigma, quadrature_domain(p, sigma));
}

double partition_function(const Potential& p, double sigma, const Box& domain) {
  if (sigma <= 0.0) throw std::invalid_argument("partition_function: sigma <= 0");
  const double v_cut = -sigma * std::log(1e-14);
  double w = peak_width(p, sigma);
  if (p.dimension == 1) {
    if (p.value({domain.lo[0]}) < v_cut || p.value({domain.hi[0]}) < v_cut)
      throw std::invalid_argument("partition_function: domain too small");
    auto f = [&](double x) { return std::exp(-p.value({x}) / sigma); };
    return peaked_integral_1d(f, domain.lo[0], domain.hi[0], p.argmin[0], w,
                              1e-11);
  }
  if (p.dimension == 2) {
    auto inner = [&](double x) {
      auto fy = [&](double y) { return std::exp(-p.value({x, y}) / sigma); };
      return peaked_integral_1d(fy, domain.lo[1], domain.hi[1], p.argmin[1], w,
                                1e-11);
    };
    return peaked_integral_1d(inner, domain.lo[0], domain.hi[0], p.argmin[0], w,
                              1e-9);
  }
  throw std::invalid_argument("partition_function: d <= 2 only");
}

double laplace_asymptote(const Potential& p, double sigma) {
  double det = det_hessian_at_min(p);
  if (det <= 0.0) throw std::invalid_argument("laplace_asymptote: singular Hessian");
  return std::pow(2.0 * M_PI * sigma, 0.5 * p.dimension) / std::sqrt(det);
}

EquilibriumMeasure make_equilibrium(const Potential& p, double sigma) {
  EquilibriumMeasure m;
  m.potential = p;
  m.sigma = sigma;
  m.domain = quadrature_domain(p, sigma);
  m.z = partition_function(p, sigma, m.domain);
  return m;
}

double density(const EquilibriumMeasure& m, const Vec& x) {
  return std::exp(-m.potential.value(x) / m.sigma) / m.z;
}

double median(const EquilibriumMeasure& m) {
  if (m.potential.dimension != 1) throw std::invalid_argument("median: 1D only");
  double lo = m.domain.lo[0], hi = m.domain.hi[0];
  double w = peak_width(m.potential, m.sigma);
  auto cdf = [&](double x) {
    if (x <= lo) return 0.0;
    auto f = [&](double y) { return density(m, {y}); };
    return peaked_integral_1d(f, lo, x, m.potential.argmin[0], w, 1e-10);
  };
  return bisect_increasing(cdf, lo, hi, 0.5, 1e-12);
}

double moment(const EquilibriumMeasure& m,
              const std::function<double(const Vec&)>& g) {
  double w = peak_width(m.potential, m.sigma);
  if (m.potential.dimension == 1) {
    auto f = [&](double x) { return g({x}) * density(m, {x}); };
    double val = peaked_integral_1d(f, m.domain.lo[0], m.domain.hi[0],
                                    m.potential.argmin[0], w, 1e-11);
    if (!std::isfinite(val)) throw std::runtime_error("moment: non-integrable probe");
    return val;
  }
  auto inner = [&](double x) {
    auto fy = [&](double y) { return g({x, y}) * density(m, {x, y}); };
    return peaked_integral_1d(fy, m.domain.lo[1], m.domain.hi[1],
                              m.potential.argmin[1], w, 1e-11);
  };
  double val = peaked_integral_1d(inner, m.domain.lo[0], m.domain.hi[0],
                                  m.potential.argmin[0], w, 1e-9);
  if (!std::isfinite(val)) throw std::runtime_error("moment: non-integrable probe");
  return val;
}

double tail_mass(const EquilibriumMeasure& m, double radius) {
  if (radius < 0.0) throw std::invalid_argument("tail_mass: radius < 0");
  if (m.potential.dimension == 1) {
    double lo = std::max(m.domain.lo[0], -radius);
    double hi = std::min(m.domain.hi[0], radius);
    if (hi <= lo) return 1.0;
    double w = peak_width(m.potential, m.sigma);
    auto f = [&](double x) { return density(m, {x}); };
    double inside =
        peaked_integral_1d(f, lo, hi, m.potential.argmin[0], w, 1e-11);
    return std::max(0.0, 1.0 - inside);
  }
  // 2D: midpoint rule with a disc indicator; accuracy limited by the grid.
  const int n = 1024;
  double hx = (m.domain.hi[0] - m.domain.lo[0]) / n;
  double hy = (m.domain.hi[1] - m.domain.lo[1]) / n;
  double inside = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = m.domain.lo[0] + (i + 0.5) * hx;
    for (int j = 0; j < n; ++j) {
      double y = m.domain.lo[1] + (j + 0.5) * hy;
      if (x * x + y * y <= radius * radius) inside += density(m, {x, y});
    }
  }
  return std::max(0.0, 1.0 - inside * hx * hy);
}

}  // namespace anneal
