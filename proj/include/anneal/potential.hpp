#ifndef ANNEAL_POTENTIAL_HPP
#define ANNEAL_POTENTIAL_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace anneal {

using Vec = std::vector<double>;

struct Box {
  Vec lo, hi;
};

/// An evaluable objective with gradient and Laplacian, normalized so that
/// the global minimum value is exactly zero.
struct Potential {
  int dimension = 1;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<double(const Vec&)> laplacian;
  Vec argmin;
  std::vector<double> hessian_at_min;  // row-major dimension x dimension
  std::optional<double> tail_exponent;

  // 1D conveniences.
  double value1(double x) const { return value(Vec{x}); }
  double gradient1(double x) const { return gradient(Vec{x})[0]; }
  double laplacian1(double x) const { return laplacian(Vec{x}); }
};

struct EvalTriple {
  double value;
  Vec gradient;
  double laplacian;
};

struct HypothesisReport {
  double grad_sup = 0.0;
  double laplacian_sign_radius = 0.0;  // +inf when Delta V > 0 arbitrarily far out
  double growth_margin = 0.0;          // min over grid of V - ln(|x|)^2, |x| > 1
  bool pass_minimum = false;           // V >= 0 on grid, V(argmin) = 0
  bool pass_growth = false;
  bool pass_gradient = false;
  bool pass_concavity = false;
};

// Registry of built-in potentials:
//   quadratic            params: {dim}                    V = |x|^2 / 2
//   tilted_double_well_1d params: {tilt, stiffness=1}     V = k(x^2-1)^2 - tilt*x, shifted
//   alpha_tail_1d        params: {alpha, core_radius=1}   V = |x|^alpha outside a C^2 core
//   multiwell_2d         params: {dip_amp, dip_x, dip_width=0.5}
Potential make_builtin(const std::string& name, const std::vector<double>& params = {});

EvalTriple evaluate(const Potential& p, const Vec& x);

HypothesisReport check_hypotheses(const Potential& p, const Box& box, int resolution);

double det_hessian_at_min(const Potential& p);

}  // namespace anneal

#endif
