#ifndef ANNEAL_LANDSCAPE_HPP
#define ANNEAL_LANDSCAPE_HPP

#include <cstddef>
#include <vector>

#include "anneal/potential.hpp"

namespace anneal {

/// Barrier structure of a potential on a grid: h is the minimax ("stay as
/// low as possible") path height from each node to the argmin node, depth is
/// the barrier a point must climb, and d_star the worst barrier overall.
struct LandscapeSummary {
  std::vector<Vec> grid;
  std::vector<double> v;
  std::vector<double> h;
  std::vector<double> depth;            // h - v, always >= 0
  std::vector<double> good_path_radius; // max |node| on the recovered path
  double d_star = 0.0;
  std::size_t witness_node = 0;
  double band = 0.0;  // max variation of V over one grid cell
};

LandscapeSummary barrier_profile_1d(const Potential& p,
                                    const std::vector<double>& nodes);

LandscapeSummary critical_depth_grid(const Potential& p, const Box& box,
                                     int resolution);

}  // namespace anneal

#endif
