#ifndef ANNEAL_EQUILIBRIUM_HPP
#define ANNEAL_EQUILIBRIUM_HPP

#include <functional>

#include "anneal/potential.hpp"

namespace anneal {

/// Instantaneous equilibrium measure mu_sigma = exp(-V/sigma) / Z_sigma on a
/// quadrature box chosen large enough that the integrand has decayed at the
/// boundary. Dimension cap: d <= 2.
struct EquilibriumMeasure {
  Potential potential;
  double sigma;
  double z;
  Box domain;
};

// Smallest (by doubling) box around the argmin on which the boundary
// integrand is below 1e-16 of the interior maximum.
Box quadrature_domain(const Potential& p, double sigma);

double partition_function(const Potential& p, double sigma);
double partition_function(const Potential& p, double sigma, const Box& domain);

// (2 pi sigma)^(d/2) / sqrt(det Hess V(argmin)).
double laplace_asymptote(const Potential& p, double sigma);

EquilibriumMeasure make_equilibrium(const Potential& p, double sigma);

double density(const EquilibriumMeasure& m, const Vec& x);

double median(const EquilibriumMeasure& m);  // 1D only
double moment(const EquilibriumMeasure& m, const std::function<double(const Vec&)>& g);
double tail_mass(const EquilibriumMeasure& m, double radius);

}  // namespace anneal

#endif
