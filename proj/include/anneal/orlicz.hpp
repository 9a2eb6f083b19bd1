#ifndef ANNEAL_ORLICZ_HPP
#define ANNEAL_ORLICZ_HPP

#include <utility>
#include <vector>

namespace anneal {

/// Finite test bed for the Orlicz / entropy inequalities: a probability
/// measure given by atom weights (atom positions are irrelevant here).
struct DiscreteMeasure {
  std::vector<double> weights;
};

// The Young pair: psi(x) = x log(1+x), phi(x) = psi(x^2), psi* the Legendre
// transform of psi, and psi_hat(x) = 1 / (psi*)^{-1}(1/x).
double psi(double x);
double phi(double x);
double psi_star(double y);
double psi_star_inv(double z);
double psi_hat(double x);      // x in (0, 1)
double psi_hat_inv(double y);

enum class Young { psi, phi, psi_star };

// Luxembourg norm inf{lambda : sum w_i Y(|f_i|/lambda) <= 1}.
double luxembourg_norm(const std::vector<double>& f, const DiscreteMeasure& mu,
                       Young which);

// Lower median: smallest value m with mu(f <= m) >= 1/2.
double lower_median(const DiscreteMeasure& mu, const std::vector<double>& f);

double mean(const DiscreteMeasure& mu, const std::vector<double>& f);

struct EntropyTriple {
  double ent;    // Ent_mu(f^2)
  double var;    // Var_mu(f)
  double psent;  // Ps-Ent of f^2: sum w f^2 log^2(e + f^2 / ||f^2||_1)
};

EntropyTriple entropy_functionals(const DiscreteMeasure& mu,
                                  const std::vector<double>& f);

// Entropy of an arbitrary nonnegative g (not squared): sum w g log g - (sum
// w g) log(sum w g), with 0 log 0 = 0.
double entropy_of(const DiscreteMeasure& mu, const std::vector<double>& g);

// ||f - m_f||_phi^2 <= C (Ent(f^2) + 3 E(f^2)); returns (lhs, rhs).
std::pair<double, double> orlicz_entropy_bound(const DiscreteMeasure& mu,
                                        const std::vector<double>& f);

// Ent((f - mu f)^2) <= Ent(f^2) + E(f^2); returns (lhs, rhs).
std::pair<double, double> centered_entropy_bound(const DiscreteMeasure& mu,
                                        const std::vector<double>& f);

// (1/delta) Var(f) + 4 delta PsEnt(f^2) - Ent(f^2), for f with mu(f^2) = 1.
double entropy_split_gap(const DiscreteMeasure& mu, const std::vector<double>& f,
                  double delta);

// The chain constant (3/2) (1 - sqrt(5/8))^-2 used by orlicz_entropy_bound.
double orlicz_entropy_constant();

}  // namespace anneal

#endif
