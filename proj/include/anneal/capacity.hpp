#ifndef ANNEAL_CAPACITY_HPP
#define ANNEAL_CAPACITY_HPP

#include <utility>
#include <vector>

#include "anneal/potential.hpp"

namespace anneal {

/// Lattice graph carrying a discretized probability measure: node weights
/// are cell masses, edge conductances discretize the mu-weighted Dirichlet
/// form (harmonic mean of the endpoint densities over the cell width).
struct WeightedGraph {
  int nx = 0, ny = 1;  // ny == 1 for 1D paths
  std::vector<double> weight;  // node masses, sum 1
  std::vector<double> v;       // potential value per node
  int argmin_node = 0;
  struct Edge {
    int a, b;
    double c;
  };
  std::vector<Edge> edges;
};

WeightedGraph graph_from_potential_1d(const Potential& p, double sigma,
                                      double lo, double hi, int n);
WeightedGraph graph_from_potential_2d(const Potential& p, double sigma,
                                      const Box& box, int nx, int ny);

double dirichlet_energy(const WeightedGraph& g, const std::vector<double>& f);

// Dirichlet energy of the harmonic extension of f = 1 on A, f = 0 on G.
// Requires A, G disjoint and nonempty and mu(G) >= 1/2.
double two_set_capacity(const WeightedGraph& g, const std::vector<int>& A,
                        const std::vector<int>& G);

// Smallest connected sublevel neighborhood of the argmin node with mass
// >= 1/2. Grounding the dominant well keeps secondary wells and tails
// available as candidate sets A.
std::vector<int> default_ground(const WeightedGraph& g);

enum class CapacityFamily { intervals, sublevel_sets };

// min over family sets A with kappa <= mu(A) <= 1/2, disjoint from the
// default ground, of Cap(A, ground) / mu(A). The family is enumerable, so
// the result upper-bounds the all-Borel constant.
double measure_capacity_constant(const WeightedGraph& g, double kappa,
                                 CapacityFamily family);

struct PoincareCheck {
  double constant_bound;    // diam^2 / pi^2
  double discrete_optimal;  // 1 / (smallest nonzero Neumann eigenvalue)
};

// widths: 1 entry for an interval, 2 for a rectangle.
PoincareCheck convex_poincare_check(const std::vector<double>& widths,
                                    int resolution);

}  // namespace anneal

#endif
