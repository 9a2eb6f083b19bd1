#include "anneal/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "anneal/numerics.hpp"

namespace anneal {
namespace {

double harmonic_mean(double a, double b) {
  if (a <= 0.0 || b <= 0.0) return 0.0;
  return 2.0 * a * b / (a + b);
}

// Cell-center densities of mu_sigma on a uniform 1D grid, shifted by the
// grid minimum of V so small sigma stays representable.
std::vector<double> densities_1d(const Potential& p, double sigma, double lo,
                                 double h, int n, std::vector<double>& v) {
  v.resize(n);
  double vmin = kInf;
  for (int i = 0; i < n; ++i) {
    v[i] = p.value1(lo + (i + 0.5) * h);
    vmin = std::min(vmin, v[i]);
  }
  std::vector<double> rho(n);
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    rho[i] = std::exp(-(v[i] - vmin) / sigma);
    z += rho[i] * h;
  }
  for (int i = 0; i < n; ++i) rho[i] /= z;
  return rho;
}

// Jacobi-preconditioned conjugate gradient for a SPD operator given as a
// matvec; returns once ||r|| <= tol.
std::vector<double> conjugate_gradient(
    const std::function<void(const std::vector<double>&, std::vector<double>&)>&
        matvec,
    const std::vector<double>& b, const std::vector<double>& inv_diag,
    double tol, int max_iter) {
  std::size_t n = b.size();
  std::vector<double> x(n, 0.0), r = b, z(n), q(n), d(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  d = z;
  double rz = 0.0;
  for (std::size_t i = 0; i < n; ++i) rz += r[i] * z[i];
  for (int it = 0; it < max_iter; ++it) {
    double rn = 0.0;
    for (std::size_t i = 0; i < n; ++i) rn += r[i] * r[i];
    if (std::sqrt(rn) <= tol) break;
    matvec(d, q);
    double dq = 0.0;
    for (std::size_t i = 0; i < n; ++i) dq += d[i] * q[i];
    if (dq <= 0.0) break;
    double alpha = rz / dq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * d[i];
      r[i] -= alpha * q[i];
    }
    double rz_new = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = inv_diag[i] * r[i];
      rz_new += r[i] * z[i];
    }
    double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) d[i] = z[i] + beta * d[i];
  }
  return x;
}

// Connected component of {v <= level} containing the argmin node.
std::vector<char> sublevel_component(const WeightedGraph& g, double level) {
  std::vector<std::vector<std::pair<int, double>>> adj(g.weight.size());
  for (const auto& e : g.edges) {
    adj[e.a].push_back({e.b, e.c});
    adj[e.b].push_back({e.a, e.c});
  }
  std::vector<char> in(g.weight.size(), 0);
  if (g.v[g.argmin_node] > level) return in;
  std::queue<int> q;
  q.push(g.argmin_node);
  in[g.argmin_node] = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (auto [w, c] : adj[u])
      if (!in[w] && g.v[w] <= level) {
        in[w] = 1;
        q.push(w);
      }
  }
  return in;
}

double component_mass(const WeightedGraph& g, const std::vector<char>& in) {
  double m = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i)
    if (in[i]) m += g.weight[i];
  return m;
}

}  // namespace

WeightedGraph graph_from_potential_1d(const Potential& p, double sigma,
                                      double lo, double hi, int n) {
  if (p.dimension != 1)
    throw std::invalid_argument("graph_from_potential_1d: 1D potential required");
  if (n < 2 || hi <= lo)
    throw std::invalid_argument("graph_from_potential_1d: bad grid");
  WeightedGraph g;
  g.nx = n;
  g.ny = 1;
  double h = (hi - lo) / n;
  std::vector<double> rho = densities_1d(p, sigma, lo, h, n, g.v);
  g.weight.resize(n);
  for (int i = 0; i < n; ++i) {
    g.weight[i] = rho[i] * h;
    if (g.v[i] < g.v[g.argmin_node]) g.argmin_node = i;
  }
  g.edges.reserve(n - 1);
  for (int i = 0; i + 1 < n; ++i)
    g.edges.push_back({i, i + 1, harmonic_mean(rho[i], rho[i + 1]) / h});
  return g;
}

WeightedGraph graph_from_potential_2d(const Potential& p, double sigma,
                                      const Box& box, int nx, int ny) {
  if (p.dimension != 2)
    throw std::invalid_argument("graph_from_potential_2d: 2D potential required");
  if (nx < 2 || ny < 2)
    throw std::invalid_argument("graph_from_potential_2d: bad grid");
  WeightedGraph g;
  g.nx = nx;
  g.ny = ny;
  double hx = (box.hi[0] - box.lo[0]) / nx;
  double hy = (box.hi[1] - box.lo[1]) / ny;
  int n = nx * ny;
  g.v.resize(n);
  std::vector<double> rho(n);
  double vmin = kInf;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double x = box.lo[0] + (i + 0.5) * hx;
      double y = box.lo[1] + (j + 0.5) * hy;
      g.v[j * nx + i] = p.value({x, y});
      vmin = std::min(vmin, g.v[j * nx + i]);
    }
  double z = 0.0;
  for (int k = 0; k < n; ++k) {
    rho[k] = std::exp(-(g.v[k] - vmin) / sigma);
    z += rho[k] * hx * hy;
  }
  g.weight.resize(n);
  for (int k = 0; k < n; ++k) {
    rho[k] /= z;
    g.weight[k] = rho[k] * hx * hy;
    if (g.v[k] < g.v[g.argmin_node]) g.argmin_node = k;
  }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      int k = j * nx + i;
      if (i + 1 < nx)
        g.edges.push_back({k, k + 1, harmonic_mean(rho[k], rho[k + 1]) * hy / hx});
      if (j + 1 < ny)
        g.edges.push_back({k, k + nx, harmonic_mean(rho[k], rho[k + nx]) * hx / hy});
    }
  return g;
}

double dirichlet_energy(const WeightedGraph& g, const std::vector<double>& f) {
  double e = 0.0;
  for (const auto& edge : g.edges) {
    double d = f[edge.a] - f[edge.b];
    e += edge.c * d * d;
  }
  return e;
}

double two_set_capacity(const WeightedGraph& g, const std::vector<int>& A,
                        const std::vector<int>& G) {
  if (A.empty() || G.empty())
    throw std::invalid_argument("two_set_capacity: empty constraint set");
  int n = static_cast<int>(g.weight.size());
  std::vector<int> tag(n, 0);  // 0 free, 1 in A, 2 in G
  for (int a : A) tag[a] = 1;
  double mass_g = 0.0;
  for (int b : G) {
    if (tag[b] == 1)
      throw std::invalid_argument("two_set_capacity: A and G overlap");
    tag[b] = 2;
    mass_g += g.weight[b];
  }
  if (mass_g < 0.5 - 1e-12)
    throw std::invalid_argument("two_set_capacity: ground mass below 1/2");

  std::vector<int> idx(n, -1);
  std::vector<int> free_nodes;
  for (int k = 0; k < n; ++k)
    if (tag[k] == 0) {
      idx[k] = static_cast<int>(free_nodes.size());
      free_nodes.push_back(k);
    }

  std::vector<double> f(n, 0.0);
  for (int a : A) f[a] = 1.0;
  if (!free_nodes.empty()) {
    std::size_t m = free_nodes.size();
    std::vector<double> diag(m, 0.0), rhs(m, 0.0);
    for (const auto& e : g.edges) {
      if (idx[e.a] >= 0) diag[idx[e.a]] += e.c;
      if (idx[e.b] >= 0) diag[idx[e.b]] += e.c;
      if (idx[e.a] >= 0 && tag[e.b] == 1) rhs[idx[e.a]] += e.c;
      if (idx[e.b] >= 0 && tag[e.a] == 1) rhs[idx[e.b]] += e.c;
    }
    std::vector<double> inv_diag(m);
    for (std::size_t i = 0; i < m; ++i)
      inv_diag[i] = diag[i] > 0.0 ? 1.0 / diag[i] : 0.0;
    auto matvec = [&](const std::vector<double>& x, std::vector<double>& y) {
      for (std::size_t i = 0; i < m; ++i) y[i] = diag[i] * x[i];
      for (const auto& e : g.edges) {
        if (idx[e.a] >= 0 && idx[e.b] >= 0) {
          y[idx[e.a]] -= e.c * x[idx[e.b]];
          y[idx[e.b]] -= e.c * x[idx[e.a]];
        }
      }
    };
    double bnorm = 0.0;
    for (double bi : rhs) bnorm += bi * bi;
    double tol = 1e-12 * std::max(1.0, std::sqrt(bnorm));
    auto sol = conjugate_gradient(matvec, rhs, inv_diag, tol,
                                  10 * static_cast<int>(m) + 200);
    for (std::size_t i = 0; i < m; ++i) f[free_nodes[i]] = sol[i];
  }
  return dirichlet_energy(g, f);
}

std::vector<int> default_ground(const WeightedGraph& g) {
  std::vector<double> levels = g.v;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  // Smallest sublevel component around the argmin holding mass >= 1/2, so
  // candidate sets (secondary wells, tails) stay outside the ground.
  int lo = 0, hi = static_cast<int>(levels.size()) - 1;
  int best = hi;
  while (lo <= hi) {
    int mid = (lo + hi) / 2;
    auto in = sublevel_component(g, levels[mid]);
    if (component_mass(g, in) >= 0.5) {
      best = mid;
      hi = mid - 1;
    } else {
      lo = mid + 1;
    }
  }
  auto in = sublevel_component(g, levels[best]);
  std::vector<int> ground;
  for (std::size_t k = 0; k < in.size(); ++k)
    if (in[k]) ground.push_back(static_cast<int>(k));
  if (ground.empty())
    throw std::runtime_error("default_ground: empty ground set");
  return ground;
}

double measure_capacity_constant(const WeightedGraph& g, double kappa,
                                 CapacityFamily family) {
  if (kappa <= 0.0 || kappa >= 0.5)
    throw std::invalid_argument("measure_capacity_constant: kappa outside (0, 1/2)");
  std::vector<int> ground = default_ground(g);
  std::vector<char> grounded(g.weight.size(), 0);
  for (int b : ground) grounded[b] = 1;

  double best = kInf;
  if (family == CapacityFamily::intervals) {
    if (g.ny != 1)
      throw std::invalid_argument("measure_capacity_constant: intervals need 1D");
    int n = g.nx;
    std::vector<double> wpre(n + 1, 0.0);
    for (int i = 0; i < n; ++i) wpre[i + 1] = wpre[i] + g.weight[i];
    // Scan every maximal ungrounded run. Resistances are accumulated
    // outward from the adjacent ground edges; a global prefix sum would
    // cancel catastrophically once a far tail contributes huge resistances.
    int gl = 0;
    while (gl < n) {
      while (gl < n && grounded[gl]) ++gl;
      if (gl >= n) break;
      int gr = gl;
      while (gr + 1 < n && !grounded[gr + 1]) ++gr;
      int len = gr - gl + 1;
      std::vector<double> rl(len, kInf), rr(len, kInf);
      if (gl > 0) {
        rl[0] = 1.0 / g.edges[gl - 1].c;
        for (int i = 1; i < len; ++i)
          rl[i] = rl[i - 1] + 1.0 / g.edges[gl - 1 + i].c;
      }
      if (gr + 1 < n) {
        rr[len - 1] = 1.0 / g.edges[gr].c;
        for (int j = len - 2; j >= 0; --j)
          rr[j] = rr[j + 1] + 1.0 / g.edges[gl + j].c;
      }
      for (int i = gl; i <= gr; ++i) {
        for (int j = i; j <= gr; ++j) {
          double mass = wpre[j + 1] - wpre[i];
          if (mass < kappa) continue;
          if (mass > 0.5) break;
          double cap = 1.0 / rl[i - gl] + 1.0 / rr[j - gl];
          if (cap > 0.0) best = std::min(best, cap / mass);
        }
      }
      gl = gr + 1;
    }
  } else {
    // Sublevel-set ladder: connected components of {V <= level}, skipping
    // anything touching the ground set.
    std::vector<std::vector<int>> adj(g.weight.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      adj[g.edges[e].a].push_back(g.edges[e].b);
      adj[g.edges[e].b].push_back(g.edges[e].a);
    }
    double vlo = kInf, vhi = -kInf;
    for (std::size_t k = 0; k < g.v.size(); ++k)
      if (!grounded[k]) {
        vlo = std::min(vlo, g.v[k]);
        vhi = std::max(vhi, g.v[k]);
      }
    const int ladder = 48;
    for (int step = 0; step <= ladder; ++step) {
      double level = vlo + (vhi - vlo) * step / ladder;
      std::vector<int> comp(g.weight.size(), -1);
      int ncomp = 0;
      for (std::size_t s = 0; s < g.weight.size(); ++s) {
        if (comp[s] >= 0 || grounded[s] || g.v[s] > level) continue;
        std::queue<int> q;
        q.push(static_cast<int>(s));
        comp[s] = ncomp;
        std::vector<int> nodes;
        bool touches_ground = false;
        while (!q.empty()) {
          int u = q.front();
          q.pop();
          nodes.push_back(u);
          for (int w : adj[u]) {
            if (grounded[w]) {
              touches_ground = true;
              continue;
            }
            if (comp[w] < 0 && g.v[w] <= level) {
              comp[w] = ncomp;
              q.push(w);
            }
          }
        }
        ++ncomp;
        if (touches_ground) continue;
        double mass = 0.0;
        for (int u : nodes) mass += g.weight[u];
        if (mass < kappa || mass > 0.5) continue;
        double cap = two_set_capacity(g, nodes, ground);
        best = std::min(best, cap / mass);
      }
    }
  }
  if (!std::isfinite(best))
    throw std::invalid_argument("measure_capacity_constant: family empty");
  return best;
}

PoincareCheck convex_poincare_check(const std::vector<double>& widths,
                                    int resolution) {
  if (resolution < 32)
    throw std::invalid_argument("convex_poincare_check: resolution < 32");
  if (widths.empty() || widths.size() > 2)
    throw std::invalid_argument("convex_poincare_check: 1 or 2 widths");
  double diam2 = 0.0;
  for (double w : widths) diam2 += w * w;
  PoincareCheck out;
  out.constant_bound = diam2 / (M_PI * M_PI);

  int nx = resolution;
  int ny = widths.size() == 2 ? resolution : 1;
  double hx = widths[0] / nx;
  double hy = widths.size() == 2 ? widths[1] / ny : 1.0;
  std::size_t n = static_cast<std::size_t>(nx) * ny;

  auto matvec = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        std::size_t k = static_cast<std::size_t>(j) * nx + i;
        double acc = 0.0;
        if (i > 0) acc += (x[k] - x[k - 1]) / (hx * hx);
        if (i + 1 < nx) acc += (x[k] - x[k + 1]) / (hx * hx);
        if (j > 0) acc += (x[k] - x[k - nx]) / (hy * hy);
        if (j + 1 < ny) acc += (x[k] - x[k + nx]) / (hy * hy);
        y[k] = acc;
      }
  };
  auto deflate = [&](std::vector<double>& x) {
    double mean = 0.0;
    for (double xi : x) mean += xi;
    mean /= static_cast<double>(n);
    for (double& xi : x) xi -= mean;
  };

  std::vector<double> diag(n, 0.0), inv_diag(n);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      std::size_t k = static_cast<std::size_t>(j) * nx + i;
      double acc = 0.0;
      if (i > 0) acc += 1.0 / (hx * hx);
      if (i + 1 < nx) acc += 1.0 / (hx * hx);
      if (j > 0) acc += 1.0 / (hy * hy);
      if (j + 1 < ny) acc += 1.0 / (hy * hy);
      diag[k] = acc;
      inv_diag[k] = 1.0 / acc;
    }

  // Inverse power iteration on the constants-deflated operator.
  std::vector<double> b(n);
  Rng rng(0x5eedc0de);
  for (double& bi : b) bi = rng.uniform(-1.0, 1.0);
  deflate(b);
  double lambda = 0.0;
  for (int it = 0; it < 80; ++it) {
    double norm = 0.0;
    for (double bi : b) norm += bi * bi;
    norm = std::sqrt(norm);
    for (double& bi : b) bi /= norm;
    auto matvec_deflated = [&](const std::vector<double>& x,
                               std::vector<double>& y) {
      std::vector<double> xd = x;
      deflate(xd);
      matvec(xd, y);
      deflate(y);
    };
    auto y = conjugate_gradient(matvec_deflated, b, inv_diag, 1e-13,
                                static_cast<int>(n) + 400);
    deflate(y);
    double by = 0.0;
    for (std::size_t k = 0; k < n; ++k) by += b[k] * y[k];
    double lambda_new = 1.0 / by;
    b = y;
    deflate(b);
    if (it > 2 && std::abs(lambda_new - lambda) <= 1e-12 * std::abs(lambda_new)) {
      lambda = lambda_new;
      break;
    }
    lambda = lambda_new;
  }
  out.discrete_optimal = 1.0 / lambda;
  return out;
}

}  // namespace anneal
