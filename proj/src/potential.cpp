#include "anneal/potential.hpp"

#include <cmath>
#include <stdexcept>

#include "anneal/numerics.hpp"

namespace anneal {
namespace {

double norm2(const Vec& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// Newton polish of a 1D stationary point.
double polish_min_1d(const std::function<double(double)>& dv,
                     const std::function<double(double)>& d2v, double x0) {
  double x = x0;
  for (int i = 0; i < 80; ++i) {
    double g = dv(x), h = d2v(x);
    if (std::abs(h) < 1e-14) break;
    double step = g / h;
    x -= step;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
  }
  return x;
}

void validate(const Potential& p) {
  // Gradient must agree with central differences at random probe points
  // (relative tolerance 1e-5), and the minimum must be normalized to 0.
  Rng rng(0xA11CE5ULL);
  const double h = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    Vec x(p.dimension);
    for (auto& xi : x) xi = rng.uniform(-3.0, 3.0);
    Vec g = p.gradient(x);
    for (int k = 0; k < p.dimension; ++k) {
      Vec xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      double fd = (p.value(xp) - p.value(xm)) / (2.0 * h);
      if (std::abs(fd - g[k]) / (1.0 + std::abs(g[k])) > 1e-5)
        throw std::runtime_error("potential: gradient/value mismatch");
    }
  }
  if (std::abs(p.value(p.argmin)) > 1e-10)
    throw std::runtime_error("potential: V(argmin) != 0");
  // Hessian SPD (d <= 2).
  if (p.dimension == 1) {
    if (p.hessian_at_min[0] <= 0.0)
      throw std::runtime_error("potential: hessian not positive definite");
  } else if (p.dimension == 2) {
    double a = p.hessian_at_min[0], b = p.hessian_at_min[1],
           d = p.hessian_at_min[3];
    if (a <= 0.0 || a * d - b * b <= 0.0)
      throw std::runtime_error("potential: hessian not positive definite");
  }
}

Potential make_quadratic(const std::vector<double>& params) {
  int dim = params.empty() ? 1 : static_cast<int>(params[0]);
  if (dim < 1 || dim > 3) throw std::invalid_argument("quadratic: bad dimension");
  Potential p;
  p.dimension = dim;
  p.value = [](const Vec& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return 0.5 * s;
  };
  p.gradient = [](const Vec& x) { return x; };
  p.laplacian = [dim](const Vec&) { return static_cast<double>(dim); };
  p.argmin.assign(dim, 0.0);
  p.hessian_at_min.assign(dim * dim, 0.0);
  for (int i = 0; i < dim; ++i) p.hessian_at_min[i * dim + i] = 1.0;
  return p;
}

Potential make_tilted_double_well(const std::vector<double>& params) {
  double tilt = params.empty() ? 0.3 : params[0];
  double k = params.size() > 1 ? params[1] : 1.0;
  if (k <= 0.0) throw std::invalid_argument("tilted_double_well_1d: stiffness <= 0");
  // Two wells exist only while the tilt stays below the cubic's local max.
  double tilt_max = 8.0 * k / (3.0 * std::sqrt(3.0));
  if (tilt <= 0.0 || tilt >= tilt_max)
    throw std::invalid_argument("tilted_double_well_1d: tilt out of (0, 8k/(3*sqrt(3)))");

  auto raw = [k, tilt](double x) {
    double q = x * x - 1.0;
    return k * q * q - tilt * x;
  };
  auto draw = [k, tilt](double x) { return 4.0 * k * x * (x * x - 1.0) - tilt; };
  auto d2raw = [k](double x) { return k * (12.0 * x * x - 4.0); };

  double xmin = polish_min_1d(draw, d2raw, 1.0);
  double vmin = raw(xmin);

  Potential p;
  p.dimension = 1;
  p.value = [raw, vmin](const Vec& x) { return raw(x[0]) - vmin; };
  p.gradient = [draw](const Vec& x) { return Vec{draw(x[0])}; };
  p.laplacian = [d2raw](const Vec& x) { return d2raw(x[0]); };
  p.argmin = {xmin};
  p.hessian_at_min = {d2raw(xmin)};
  return p;
}

// V = (core_radius)^alpha * u(|x|/core_radius) with u(s) = s^alpha for s >= 1
// and an even sextic for s < 1 matching value, slope and curvature at s = 1.
Potential make_alpha_tail(const std::vector<double>& params) {
  double alpha = params.empty() ? 0.5 : params[0];
  double x0 = params.size() > 1 ? params[1] : 1.0;
  if (alpha <= 0.0 || alpha > 1.0)
    throw std::invalid_argument("alpha_tail_1d: alpha must be in (0, 1]");
  if (x0 <= 0.0) throw std::invalid_argument("alpha_tail_1d: core_radius <= 0");

  double a6 = (alpha - 2.0) * (alpha - 4.0) / 8.0;
  double a4 = 0.5 * (alpha - 2.0) - 2.0 * a6;
  double a2 = 1.0 - a4 - a6;
  double scale = std::pow(x0, alpha);

  auto u = [=](double s) {
    if (s >= 1.0) return std::pow(s, alpha);
    double s2 = s * s;
    return s2 * (a2 + s2 * (a4 + s2 * a6));
  };
  auto du = [=](double s) {
    if (s >= 1.0) return alpha * std::pow(s, alpha - 1.0);
    double s2 = s * s;
    return s * (2.0 * a2 + s2 * (4.0 * a4 + s2 * 6.0 * a6));
  };
  auto d2u = [=](double s) {
    if (s >= 1.0) return alpha * (alpha - 1.0) * std::pow(s, alpha - 2.0);
    double s2 = s * s;
    return 2.0 * a2 + s2 * (12.0 * a4 + s2 * 30.0 * a6);
  };

  Potential p;
  p.dimension = 1;
  p.value = [=](const Vec& x) { return scale * u(std::abs(x[0]) / x0); };
  p.gradient = [=](const Vec& x) {
    double s = std::abs(x[0]) / x0;
    double sign = x[0] >= 0.0 ? 1.0 : -1.0;
    return Vec{scale / x0 * du(s) * sign};
  };
  p.laplacian = [=](const Vec& x) {
    return scale / (x0 * x0) * d2u(std::abs(x[0]) / x0);
  };
  p.argmin = {0.0};
  p.hessian_at_min = {scale / (x0 * x0) * 2.0 * a2};
  p.tail_exponent = alpha;
  return p;
}

// Slowly growing log background with a main Gaussian dip at the origin and a
// secondary dip at (dip_x, 0).
Potential make_multiwell_2d(const std::vector<double>& params) {
  double a1 = params.empty() ? 0.9 : params[0];
  double cx = params.size() > 1 ? params[1] : 2.5;
  double w1 = params.size() > 2 ? params[2] : 0.5;
  const double a0 = 1.5, w0 = 0.6, bg = 0.5;
  if (a1 < 0.0 || a1 >= a0)
    throw std::invalid_argument("multiwell_2d: dip_amp must be in [0, 1.5)");
  if (std::abs(cx) < 1.5)
    throw std::invalid_argument("multiwell_2d: secondary dip too close to origin");
  if (w1 <= 0.0) throw std::invalid_argument("multiwell_2d: dip_width <= 0");

  auto raw = [=](double x, double y) {
    double r2 = x * x + y * y;
    double rho2 = (x - cx) * (x - cx) + y * y;
    return bg * std::log1p(r2) - a0 * std::exp(-r2 / (2.0 * w0 * w0)) -
           a1 * std::exp(-rho2 / (2.0 * w1 * w1));
  };
  auto grad = [=](double x, double y) {
    double r2 = x * x + y * y;
    double rho2 = (x - cx) * (x - cx) + y * y;
    double g0 = a0 * std::exp(-r2 / (2.0 * w0 * w0)) / (w0 * w0);
    double g1 = a1 * std::exp(-rho2 / (2.0 * w1 * w1)) / (w1 * w1);
    double cb = 2.0 * bg / (1.0 + r2);
    return Vec{cb * x + g0 * x + g1 * (x - cx), cb * y + g0 * y + g1 * y};
  };
  auto lap = [=](double x, double y) {
    double r2 = x * x + y * y;
    double rho2 = (x - cx) * (x - cx) + y * y;
    double e0 = a0 * std::exp(-r2 / (2.0 * w0 * w0));
    double e1 = a1 * std::exp(-rho2 / (2.0 * w1 * w1));
    double lb = 4.0 * bg / ((1.0 + r2) * (1.0 + r2));
    double l0 = -e0 * (r2 / (w0 * w0 * w0 * w0) - 2.0 / (w0 * w0));
    double l1 = -e1 * (rho2 / (w1 * w1 * w1 * w1) - 2.0 / (w1 * w1));
    return lb + l0 + l1;
  };

  // The global minimum sits at the origin by symmetry in y; polish in x.
  auto dvx = [&](double x) { return grad(x, 0.0)[0]; };
  auto d2vx = [&](double x) {
    double h = 1e-6;
    return (dvx(x + h) - dvx(x - h)) / (2.0 * h);
  };
  double xmin = polish_min_1d(dvx, d2vx, 0.0);
  double vmin = raw(xmin, 0.0);
  if (raw(cx, 0.0) - vmin <= 1e-6)
    throw std::invalid_argument("multiwell_2d: secondary dip deeper than main well");

  Potential p;
  p.dimension = 2;
  p.value = [=](const Vec& x) { return raw(x[0], x[1]) - vmin; };
  p.gradient = [=](const Vec& x) { return grad(x[0], x[1]); };
  p.laplacian = [=](const Vec& x) { return lap(x[0], x[1]); };
  p.argmin = {xmin, 0.0};
  // Hessian from central differences of the analytic gradient.
  double h = 1e-5;
  Vec gx_p = grad(xmin + h, 0.0), gx_m = grad(xmin - h, 0.0);
  Vec gy_p = grad(xmin, h), gy_m = grad(xmin, -h);
  double hxx = (gx_p[0] - gx_m[0]) / (2.0 * h);
  double hxy = (gy_p[0] - gy_m[0]) / (2.0 * h);
  double hyy = (gy_p[1] - gy_m[1]) / (2.0 * h);
  p.hessian_at_min = {hxx, hxy, hxy, hyy};
  return p;
}

}  // namespace

Potential make_builtin(const std::string& name, const std::vector<double>& params) {
  Potential p;
  if (name == "quadratic")
    p = make_quadratic(params);
  else if (name == "tilted_double_well_1d")
    p = make_tilted_double_well(params);
  else if (name == "alpha_tail_1d")
    p = make_alpha_tail(params);
  else if (name == "multiwell_2d")
    p = make_multiwell_2d(params);
  else
    throw std::invalid_argument("unknown potential: " + name);
  validate(p);
  return p;
}

EvalTriple evaluate(const Potential& p, const Vec& x) {
  if (static_cast<int>(x.size()) != p.dimension)
    throw std::invalid_argument("evaluate: dimension mismatch");
  EvalTriple t{p.value(x), p.gradient(x), p.laplacian(x)};
  if (!std::isfinite(t.value) || !std::isfinite(t.laplacian))
    throw std::runtime_error("evaluate: non-finite output");
  for (double g : t.gradient)
    if (!std::isfinite(g)) throw std::runtime_error("evaluate: non-finite gradient");
  return t;
}

HypothesisReport check_hypotheses(const Potential& p, const Box& box,
                                  int resolution) {
  if (resolution < 16) throw std::invalid_argument("check_hypotheses: resolution < 16");
  HypothesisReport rep;
  rep.growth_margin = kInf;
  double max_radius = 0.0;
  double worst_positive_lap_radius = 0.0;  // largest |x| with Delta V > 0
  bool any_positive_lap = false;
  double min_value = kInf;

  auto visit = [&](const Vec& x) {
    double v = p.value(x);
    Vec g = p.gradient(x);
    double lap = p.laplacian(x);
    double r = norm2(x);
    max_radius = std::max(max_radius, r);
    min_value = std::min(min_value, v);
    rep.grad_sup = std::max(rep.grad_sup, norm2(g));
    if (lap > 0.0) {
      any_positive_lap = true;
      worst_positive_lap_radius = std::max(worst_positive_lap_radius, r);
    }
    if (r > 1.0) {
      double lr = std::log(r);
      rep.growth_margin = std::min(rep.growth_margin, v - lr * lr);
    }
  };

  if (p.dimension == 1) {
    for (int i = 0; i < resolution; ++i) {
      double x = box.lo[0] + (box.hi[0] - box.lo[0]) * i / (resolution - 1);
      visit(Vec{x});
    }
  } else if (p.dimension == 2) {
    for (int i = 0; i < resolution; ++i)
      for (int j = 0; j < resolution; ++j) {
        double x = box.lo[0] + (box.hi[0] - box.lo[0]) * i / (resolution - 1);
        double y = box.lo[1] + (box.hi[1] - box.lo[1]) * j / (resolution - 1);
        visit(Vec{x, y});
      }
  } else {
    throw std::invalid_argument("check_hypotheses: dimension > 2 unsupported");
  }

  // Positive Laplacian reaching the outer shell of the grid cannot be told
  // apart from "positive at infinity": report an infinite sign radius.
  double cell = (box.hi[0] - box.lo[0]) / (resolution - 1);
  if (!any_positive_lap)
    rep.laplacian_sign_radius = 0.0;
  else if (worst_positive_lap_radius >= max_radius - 2.0 * cell)
    rep.laplacian_sign_radius = kInf;
  else
    rep.laplacian_sign_radius = worst_positive_lap_radius;

  rep.pass_minimum = min_value >= -1e-12 && std::abs(p.value(p.argmin)) <= 1e-12;
  rep.pass_growth = std::isfinite(rep.growth_margin);
  rep.pass_gradient = std::isfinite(rep.grad_sup);
  rep.pass_concavity = std::isfinite(rep.laplacian_sign_radius);
  return rep;
}

double det_hessian_at_min(const Potential& p) {
  if (p.dimension == 1) return p.hessian_at_min[0];
  if (p.dimension == 2)
    return p.hessian_at_min[0] * p.hessian_at_min[3] -
           p.hessian_at_min[1] * p.hessian_at_min[2];
  double det = 1.0;  // diagonal assumption beyond d = 2 is not used anywhere
  for (int i = 0; i < p.dimension; ++i)
    det *= p.hessian_at_min[i * p.dimension + i];
  return det;
}

}  // namespace anneal
