#include "anneal/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "anneal/numerics.hpp"

namespace anneal {
namespace {

double norm2(const Vec& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

void finalize(LandscapeSummary& out) {
  out.d_star = 0.0;
  out.witness_node = 0;
  out.depth.resize(out.v.size());
  for (std::size_t i = 0; i < out.v.size(); ++i) {
    out.depth[i] = out.h[i] - out.v[i];
    if (out.depth[i] > out.d_star) {
      out.d_star = out.depth[i];
      out.witness_node = i;
    }
  }
}

}  // namespace

LandscapeSummary barrier_profile_1d(const Potential& p,
                                    const std::vector<double>& nodes) {
  if (p.dimension != 1) throw std::invalid_argument("barrier_profile_1d: 1D only");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (nodes[i] <= nodes[i - 1])
      throw std::invalid_argument("barrier_profile_1d: grid not sorted");
  double x0 = p.argmin[0];
  if (x0 < nodes.front() || x0 > nodes.back())
    throw std::invalid_argument("barrier_profile_1d: argmin outside grid hull");

  LandscapeSummary out;
  std::size_t n = nodes.size();
  out.grid.reserve(n);
  out.v.resize(n);
  out.h.resize(n);
  out.good_path_radius.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.grid.push_back({nodes[i]});
    out.v[i] = p.value1(nodes[i]);
  }

  // Nearest node to the argmin; on a line the only path is the monotone
  // sweep, so h is the running max of V outward from there.
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(nodes[i] - x0) < std::abs(nodes[i0] - x0)) i0 = i;

  out.h[i0] = out.v[i0];
  out.good_path_radius[i0] = std::abs(nodes[i0]);
  for (std::size_t i = i0 + 1; i < n; ++i) {
    out.h[i] = std::max(out.h[i - 1], out.v[i]);
    out.good_path_radius[i] =
        std::max(out.good_path_radius[i - 1], std::abs(nodes[i]));
  }
  for (std::size_t i = i0; i-- > 0;) {
    out.h[i] = std::max(out.h[i + 1], out.v[i]);
    out.good_path_radius[i] =
        std::max(out.good_path_radius[i + 1], std::abs(nodes[i]));
  }

  out.band = 0.0;
  for (std::size_t i = 1; i < n; ++i)
    out.band = std::max(out.band, std::abs(out.v[i] - out.v[i - 1]));
  finalize(out);
  return out;
}

LandscapeSummary critical_depth_grid(const Potential& p, const Box& box,
                                     int resolution) {
  if (resolution < 4) throw std::invalid_argument("critical_depth_grid: resolution < 4");
  int d = p.dimension;
  std::size_t n_nodes = 1;
  std::vector<std::size_t> stride(d);
  for (int k = 0; k < d; ++k) {
    stride[k] = n_nodes;
    n_nodes *= resolution;
  }

  auto coords = [&](std::size_t idx) {
    Vec x(d);
    for (int k = 0; k < d; ++k) {
      std::size_t ik = (idx / stride[k]) % resolution;
      x[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * ik / (resolution - 1);
    }
    return x;
  };

  LandscapeSummary out;
  out.grid.resize(n_nodes);
  out.v.resize(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    out.grid[i] = coords(i);
    out.v[i] = p.value(out.grid[i]);
    if (!std::isfinite(out.v[i]))
      throw std::runtime_error("critical_depth_grid: non-finite V on grid");
  }

  // Argmin node: nearest grid node to p.argmin.
  std::size_t start = 0;
  {
    double best = kInf;
    for (std::size_t i = 0; i < n_nodes; ++i) {
      double dist = 0.0;
      for (int k = 0; k < d; ++k) {
        double diff = out.grid[i][k] - p.argmin[k];
        dist += diff * diff;
      }
      if (dist < best) {
        best = dist;
        start = i;
      }
    }
  }

  // Best-first sweep from the argmin node: priority is the max of V along
  // the path, so each node is finalized once with its minimax height.
  out.h.assign(n_nodes, kInf);
  out.good_path_radius.assign(n_nodes, 0.0);
  std::vector<bool> done(n_nodes, false);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  out.h[start] = out.v[start];
  out.good_path_radius[start] = norm2(out.grid[start]);
  pq.push({out.h[start], start});

  while (!pq.empty()) {
    auto [hu, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = true;
    for (int k = 0; k < d; ++k) {
      std::size_t ik = (u / stride[k]) % resolution;
      for (int dir = -1; dir <= 1; dir += 2) {
        if ((dir < 0 && ik == 0) ||
            (dir > 0 && ik + 1 == static_cast<std::size_t>(resolution)))
          continue;
        std::size_t v = u + dir * static_cast<long>(stride[k]);
        if (done[v]) continue;
        double cand = std::max(hu, out.v[v]);
        if (cand < out.h[v]) {
          out.h[v] = cand;
          out.good_path_radius[v] =
              std::max(out.good_path_radius[u], norm2(out.grid[v]));
          pq.push({cand, v});
        }
      }
    }
  }

  out.band = 0.0;
  for (std::size_t u = 0; u < n_nodes; ++u)
    for (int k = 0; k < d; ++k) {
      std::size_t ik = (u / stride[k]) % resolution;
      if (ik + 1 < static_cast<std::size_t>(resolution))
        out.band = std::max(out.band, std::abs(out.v[u + stride[k]] - out.v[u]));
    }
  finalize(out);
  return out;
}

}  // namespace anneal
