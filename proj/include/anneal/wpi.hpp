#ifndef ANNEAL_WPI_HPP
#define ANNEAL_WPI_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "anneal/capacity.hpp"
#include "anneal/potential.hpp"
#include "anneal/schedule.hpp"

namespace anneal {

/// One-dimensional Hardy-criterion profiles for mu_sigma and the derived
/// compensating functions. Profiles are stored in log space as well since
/// their scale is exp(depth/sigma).
struct WpiReport {
  double sigma = 0.0;
  double median = 0.0;
  std::vector<double> grid;  // cell centers
  std::vector<double> B_profile, b_profile;
  std::vector<double> log_B_profile, log_b_profile;
  double B_sup = 0.0, b_sup = 0.0;
  double log_B_sup = 0.0, log_b_sup = 0.0;
  std::function<double(double)> base_beta;  // the user-supplied beta
  std::function<double(double)> beta_fn;    // s -> 12 max(B,b) beta(s)
  std::function<double(double)> alpha_fn;   // r -> (c_univ/4) beta_fn(psi_hat_inv(r/2)/4)
  std::vector<std::pair<double, double>> one_point;  // (r, c_r)
  double d_star_ref = 0.0;
};

WpiReport hardy_profile(const Potential& p, double sigma,
                        const std::function<double(double)>& beta, double lo,
                        double hi, int n);

// s -> (log(1/s))^(4/alpha - 4), clamped to its value at 1/2 for s > 1/2.
std::function<double(double)> beta_for_power_tail(double alpha);

// Attaches beta_fn and alpha_fn (c_univ = 12 by default) to the report.
WpiReport compensating_functions(WpiReport report, double d_star,
                                 double c_univ = 12.0);

struct OnePointPair {
  std::pair<double, double> linf;    // (kappa, 12 / C_kappa)
  std::pair<double, double> orlicz;  // (2 psi_hat(kappa), 12 / C_kappa)
};

OnePointPair one_point_from_capacity(double kappa, double c_kappa);

enum class OnePointNorm { linf, orlicz };

struct VerifyResult {
  int violations = 0;
  double worst_margin = 0.0;  // min over trials of rhs - lhs
};

// Checks Var(f) <= c_r * Dirichlet(f) + r * N(f)^2 over a corpus of random
// smooth fields on the graph; N is the squared-oscillation (linf) or the
// median-centered phi-Luxembourg norm (orlicz).
VerifyResult one_point_verify(const WeightedGraph& g, double r, double c_r,
                              OnePointNorm norm, int corpus_size,
                              std::uint64_t seed);

struct CriticalRateRow {
  double sigma;
  double r_t;
  double alpha_at_r;
  double sigma_log_alpha;
};

// For each sigma, evaluates alpha_sigma at the schedule's r_t (the tuning
// value at the time when sigma(t) = sigma).
std::vector<CriticalRateRow> critical_rate_check(
    const Potential& p, const Schedule& s, const std::vector<double>& sigmas,
    const std::function<double(double)>& beta, double d_star, int grid_n = 4000);

}  // namespace anneal

#endif
