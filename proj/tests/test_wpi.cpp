#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "anneal/capacity.hpp"
#include "anneal/landscape.hpp"
#include "anneal/numerics.hpp"
#include "anneal/orlicz.hpp"
#include "anneal/wpi.hpp"

using namespace anneal;

namespace {

std::function<double(double)> flat_beta() {
  return [](double) { return 1.0; };
}

double tilted_d_star() {
  Potential p = make_builtin("tilted_double_well_1d", {0.3});
  std::vector<double> xs(2001);
  for (int i = 0; i < 2001; ++i) xs[i] = -2.5 + 5.0 * i / 2000.0;
  return barrier_profile_1d(p, xs).d_star;
}

}  // namespace

TEST_CASE("hardy profile of a convex potential stays subexponential") {
  Potential p = make_builtin("quadratic", {1});
  double prev = kInf;
  for (double sigma : {0.2, 0.1, 0.05}) {
    WpiReport rep = hardy_profile(p, sigma, flat_beta(), -6.0, 6.0, 3000);
    double rate = sigma * std::max(rep.log_B_sup, rep.log_b_sup);
    CHECK(rate < 0.1);
    CHECK(std::abs(rate) <= std::abs(prev) + 1e-12);
    prev = rate;
  }
}

TEST_CASE("symmetric potential gives matching one-sided profiles") {
  Potential p = make_builtin("quadratic", {1});
  WpiReport rep = hardy_profile(p, 0.1, flat_beta(), -5.0, 5.0, 4000);
  CHECK(std::abs(rep.median) < 0.01);
  CHECK(rep.log_B_sup == doctest::Approx(rep.log_b_sup).epsilon(0.02));
}

TEST_CASE("double well profile grows at the escape rate") {
  Potential p = make_builtin("tilted_double_well_1d", {0.3});
  double d_star = tilted_d_star();
  for (double sigma : {0.08, 0.05}) {
    WpiReport rep = hardy_profile(p, sigma, flat_beta(), -2.5, 2.5, 4000);
    double rate = sigma * std::max(rep.log_B_sup, rep.log_b_sup);
    CHECK(rate > 0.5 * d_star);
    CHECK(rate < 1.5 * d_star);
  }
}

TEST_CASE("power tail beta shapes") {
  auto b1 = beta_for_power_tail(1.0);
  CHECK(b1(0.01) == doctest::Approx(1.0));
  CHECK(b1(0.4) == doctest::Approx(1.0));

  auto b_half = beta_for_power_tail(0.5);  // exponent 4
  double s = 0.01;
  CHECK(b_half(s) ==
        doctest::Approx(std::pow(std::log(1.0 / s), 4.0)).epsilon(1e-12));
  CHECK(b_half(0.001) > b_half(0.01));
  CHECK(b_half(0.7) == doctest::Approx(b_half(0.5)));  // clamped past 1/2
  CHECK_THROWS_AS(beta_for_power_tail(0.0), std::invalid_argument);
  CHECK_THROWS_AS(beta_for_power_tail(1.5), std::invalid_argument);
}

TEST_CASE("compensating functions wire the profile constant through") {
  Potential p = make_builtin("tilted_double_well_1d", {0.3});
  WpiReport rep = hardy_profile(p, 0.1, beta_for_power_tail(0.5), -2.5, 2.5,
                                3000);
  double d_star = tilted_d_star();
  rep = compensating_functions(rep, d_star);
  CHECK(rep.d_star_ref == doctest::Approx(d_star));

  double scale = 12.0 * std::exp(std::max(rep.log_B_sup, rep.log_b_sup));
  for (double s : {0.01, 0.1, 0.4}) {
    CHECK(rep.beta_fn(s) ==
          doctest::Approx(scale * rep.base_beta(s)).epsilon(1e-9));
  }
  for (double r : {0.05, 0.2, 0.8}) {
    double expected = 3.0 * rep.beta_fn(0.25 * psi_hat_inv(0.5 * r));
    CHECK(rep.alpha_fn(r) == doctest::Approx(expected).epsilon(1e-9));
  }
  CHECK_THROWS_AS(rep.alpha_fn(0.0), std::invalid_argument);
}

TEST_CASE("alpha decreases in r") {
  Potential p = make_builtin("quadratic", {1});
  WpiReport rep = hardy_profile(p, 0.2, beta_for_power_tail(0.5), -5.0, 5.0,
                                2000);
  rep = compensating_functions(rep, 0.0);
  double prev = kInf;
  for (double r : {0.01, 0.05, 0.2, 1.0}) {
    double a = rep.alpha_fn(r);
    CHECK(a <= prev + 1e-12);
    prev = a;
  }
}

TEST_CASE("one point pair from a capacity constant") {
  OnePointPair op = one_point_from_capacity(0.1, 2.5);
  CHECK(op.linf.first == doctest::Approx(0.1));
  CHECK(op.linf.second == doctest::Approx(12.0 / 2.5));
  CHECK(op.orlicz.first == doctest::Approx(2.0 * psi_hat(0.1)).epsilon(1e-12));
  CHECK(op.orlicz.second == doctest::Approx(12.0 / 2.5));

  // Small kappa: the orlicz radius is still moderate, 2 psi_hat(0.001).
  OnePointPair tiny = one_point_from_capacity(0.001, 1.0);
  CHECK(tiny.orlicz.first <= 2.0 * 2.0 / std::log(1000.0) + 1e-12);
  CHECK(tiny.orlicz.first > 0.0);

  CHECK_THROWS_AS(one_point_from_capacity(0.7, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(one_point_from_capacity(0.1, 0.0), std::invalid_argument);
}

TEST_CASE("one point inequality holds on a random corpus for both norms") {
  Potential p = make_builtin("quadratic", {1});
  WeightedGraph g = graph_from_potential_1d(p, 0.3, -4.0, 4.0, 200);
  double kappa = 0.05;
  double ck = measure_capacity_constant(g, kappa, CapacityFamily::intervals);
  OnePointPair op = one_point_from_capacity(kappa, ck);

  VerifyResult li = one_point_verify(g, op.linf.first, op.linf.second,
                                     OnePointNorm::linf, 500, 99);
  CHECK(li.violations == 0);
  CHECK(li.worst_margin >= 0.0);

  VerifyResult orl = one_point_verify(g, op.orlicz.first, op.orlicz.second,
                                      OnePointNorm::orlicz, 500, 99);
  CHECK(orl.violations == 0);
  CHECK(orl.worst_margin >= 0.0);
}

TEST_CASE("understated constants are caught by the same checker") {
  Potential p = make_builtin("quadratic", {1});
  WeightedGraph g = graph_from_potential_1d(p, 0.3, -4.0, 4.0, 200);
  VerifyResult bogus =
      one_point_verify(g, 1e-14, 1e-14, OnePointNorm::linf, 200, 7);
  CHECK(bogus.violations > 0);
  CHECK(bogus.worst_margin < 0.0);
  CHECK_THROWS_AS(one_point_verify(g, 0.0, 1.0, OnePointNorm::linf, 10, 1),
                  std::invalid_argument);
}

TEST_CASE("well indicator needs the oscillation term") {
  // Direct negative control: for the sign-of-well observable the variance
  // cannot be paid for by the Dirichlet term alone.
  Potential p = make_builtin("tilted_double_well_1d", {0.3});
  double sigma = 0.25;
  WeightedGraph g = graph_from_potential_1d(p, sigma, -2.5, 2.5, 400);
  double split = -0.1;  // near the barrier top
  std::vector<double> f(g.weight.size());
  double mass_false = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    double x = -2.5 + (static_cast<double>(k) + 0.5) * (5.0 / 400.0);
    f[k] = x < split ? 1.0 : 0.0;
    if (x < split) mass_false += g.weight[k];
  }
  double var = mass_false * (1.0 - mass_false);
  double energy = dirichlet_energy(g, f);
  CHECK(var > 1e-3);
  // With r far below the false-well mass the bound must fail even with a
  // generous multiple of the energy.
  double r_small = 1e-4 * mass_false;
  CHECK(var > 1e-3 * energy + r_small * 1.0);
}

TEST_CASE("critical rate rows for a flat landscape stay bounded") {
  Potential p = make_builtin("quadratic", {1});
  Schedule s{ScheduleKind::logarithmic, 1.0, std::exp(3.5), 0.0};
  std::vector<double> sigmas{0.25, 0.2, 0.15, 0.1};
  auto rows = critical_rate_check(p, s, sigmas, flat_beta(), 0.0, 2000);
  REQUIRE(rows.size() == sigmas.size());
  for (const auto& row : rows) {
    CHECK(row.sigma_log_alpha < 0.6);
    CHECK(row.r_t > 0.0);
    CHECK(std::isfinite(row.alpha_at_r));
  }
  CHECK(rows.back().sigma_log_alpha < rows.front().sigma_log_alpha + 0.1);
}

TEST_CASE("critical rate rows recover the barrier depth") {
  Potential p = make_builtin("tilted_double_well_1d", {0.3});
  Schedule s{ScheduleKind::logarithmic, 1.2, std::exp(3.5), 0.0};
  double d_star = tilted_d_star();
  std::vector<double> sigmas{0.12, 0.08, 0.05};
  auto rows = critical_rate_check(p, s, sigmas, flat_beta(), d_star, 4000);
  for (const auto& row : rows) {
    CHECK(row.sigma_log_alpha > 0.4 * d_star);
    CHECK(row.sigma_log_alpha < 1.6 * d_star);
  }

  // The reported r_t matches the tuning pair at the matching time.
  for (std::size_t k = 0; k < rows.size(); ++k) {
    double t = std::exp(s.c / sigmas[k]) - s.t_offset;
    TuningPair tp = tuning_parameters(t, default_entropy_constant());
    CHECK(rows[k].r_t == doctest::Approx(tp.r).epsilon(1e-9));
  }
}

TEST_CASE("critical rate input validation") {
  Potential p = make_builtin("quadratic", {1});
  Schedule log_s{ScheduleKind::logarithmic, 1.0, std::exp(3.5), 0.0};
  Schedule flat{ScheduleKind::constant, 0.3, 0.0, 0.0};
  CHECK_THROWS_AS(critical_rate_check(p, log_s, {0.2, 0.1}, flat_beta(), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      critical_rate_check(p, log_s, {0.1, 0.2, 0.3}, flat_beta(), 0.0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      critical_rate_check(p, flat, {0.3, 0.2, 0.1}, flat_beta(), 0.0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      critical_rate_check(p, log_s, {0.3, 0.2, 1e-4}, flat_beta(), 0.0),
      std::invalid_argument);
}
