#ifndef ANNEAL_SDE_HPP
#define ANNEAL_SDE_HPP

#include <cstdint>
#include <vector>

#include "anneal/numerics.hpp"
#include "anneal/potential.hpp"
#include "anneal/schedule.hpp"

namespace anneal {

/// Initial law for an ensemble: a point mass, uniform on a box, or a
/// piecewise-constant 1D density given per cell on [lo, hi].
struct InitSampler {
  enum class Kind { point, uniform_box, density1d };
  Kind kind = Kind::point;
  Vec point;
  Box box;
  double lo = 0.0, hi = 0.0;          // density1d support
  std::vector<double> cell_weights;   // density1d, relative cell masses
};

struct EnsembleRun {
  Potential potential;
  Schedule schedule;
  int n_traj = 1;
  double t0 = 0.0, t_end = 1.0;
  double dt0 = 1e-3;
  double dt_growth = 1.0;   // per-step geometric factor (>= 1)
  double dt_max = 0.5;
  std::uint64_t seed = 0;
  InitSampler init;
  double clamp_radius = 1e3;  // reflecting box |x_k| <= clamp_radius
};

struct Histogram {
  double lo = -3.0, hi = 3.0;
  int bins = 60;
};

/// Per-record-time ensemble statistics. Standard errors are ensemble
/// (sample) standard deviations divided by sqrt(n_traj).
struct ObservableSeries {
  std::vector<double> times;
  std::vector<double> mean_v, se_v;
  std::vector<double> mean_v2, se_v2;
  std::vector<double> radii;
  std::vector<std::vector<double>> success;  // [time][radius]
  Histogram hist_spec;
  std::vector<std::vector<double>> hist;  // [time][bin], mass 1 (1D only)
  long clamp_count = 0;
  int n_traj = 0;
};

Vec sample_initial(const InitSampler& init, int dimension, Rng& rng);

ObservableSeries simulate_ensemble(const EnsembleRun& run,
                                   const std::vector<double>& record_times,
                                   const std::vector<double>& radii,
                                   const Histogram& hist = {},
                                   int n_threads = 1);

// Fraction of trajectories with |X_t - argmin| <= radius at a recorded t.
double success_fraction(const ObservableSeries& series, double radius,
                        double t);

}  // namespace anneal

#endif
