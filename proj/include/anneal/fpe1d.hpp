#ifndef ANNEAL_FPE1D_HPP
#define ANNEAL_FPE1D_HPP

#include <vector>

#include "anneal/potential.hpp"
#include "anneal/schedule.hpp"

namespace anneal {

/// Uniform cell-centered 1D grid.
struct FpeGrid {
  double lo = -1.0, hi = 1.0;
  int n = 100;
  double h() const { return (hi - lo) / n; }
  double center(int i) const { return lo + (i + 0.5) * h(); }
};

struct FpeOptions {
  double dt0 = 1e-3;       // initial step
  double dt_growth = 1.0;  // per-step geometric factor (>= 1)
  double dt_max = 0.5;     // hard cap on the step
  double cfl_safety = 5.0; // cap dt at cfl_safety * h^2 / sigma (implicit scheme)
};

/// Densities per cell per record time, the relative density f = dm/dmu, and
/// the entropy-style diagnostics along the run.
struct DensityTrajectory {
  FpeGrid grid;
  std::vector<double> times;
  std::vector<std::vector<double>> m;   // density per cell, sums*h to 1
  std::vector<std::vector<double>> f;   // m / mu_{sigma(t)}
  std::vector<double> sigma;            // sigma(t) at record times
  std::vector<double> I;                // free energy (relative entropy)
  std::vector<double> J;                // pseudo-entropy of f
  std::vector<double> tv;               // total variation to mu_t
  double boundary_flux_max = 0.0;       // always 0 for the zero-flux scheme
};

// Discretized mu_sigma on the grid (cell-center density, unit mass).
std::vector<double> discretize_mu(const Potential& p, double sigma,
                                  const FpeGrid& grid);

DensityTrajectory evolve(const Potential& p, const Schedule& s,
                         const std::vector<double>& m0, const FpeGrid& grid,
                         double t0, double t_end,
                         const std::vector<double>& record_times,
                         const FpeOptions& opt = {});

const std::vector<double>& free_energy_series(const DensityTrajectory& traj);
const std::vector<double>& pseudo_entropy_series(const DensityTrajectory& traj);

// |d/dt I - RHS| / (1 + |RHS|) with RHS = -d(1/sigma)/dt * int V(1-f) dmu
// - 2 sigma int |grad sqrt(f)|^2 dmu, at an interior record index.
double entropy_derivative_residual(const Potential& p, const Schedule& s,
                                   const DensityTrajectory& traj,
                                   std::size_t time_index);

// int V^p dm_t per record time (p in {1, 2}).
std::vector<double> moment_curve(const Potential& p,
                                 const DensityTrajectory& traj, int exponent);

// moment / (sigma^p ln(t)^p (ln ln t)^{3p}) per record time.
std::vector<double> envelope_ratio(const Potential& p, const Schedule& s,
                                   const DensityTrajectory& traj, int exponent);

// Mass of m_t within |x - center| <= radius at a record index.
double ball_mass(const DensityTrajectory& traj, std::size_t time_index,
                 double center, double radius);

}  // namespace anneal

#endif
