#include "anneal/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace anneal {

SigmaValue sigma_at(const Schedule& s, double t) {
  if (t < 0.0) throw std::invalid_argument("sigma_at: t < 0");
  switch (s.kind) {
    case ScheduleKind::logarithmic: {
      double l = std::log(t + s.t_offset);
      return {s.c / l, l > 0.0 ? 1.0 / (s.c * (t + s.t_offset)) : 0.0};
    }
    case ScheduleKind::constant:
      return {s.c, 0.0};
    case ScheduleKind::power: {
      double base = t + s.t_offset;
      double sigma = s.c * std::pow(base, -s.exponent);
      // d(1/sigma)/dt = (exponent/c) * base^(exponent-1)
      return {sigma, s.exponent / s.c * std::pow(base, s.exponent - 1.0)};
    }
  }
  throw std::logic_error("sigma_at: bad kind");
}

TuningPair tuning_parameters(double t, double entropy_constant) {
  const double e_to_e = std::exp(std::exp(1.0));
  if (t < e_to_e) throw std::invalid_argument("tuning_parameters: t < e^e");
  double lt = std::log(t);
  double llt = std::log(lt);
  TuningPair tp;
  tp.entropy_constant = entropy_constant;
  tp.delta = 1.0 / (lt * lt * std::pow(llt, 7.0));
  tp.r = 1.0 / (entropy_constant * lt * lt * std::pow(llt, 8.0));
  return tp;
}

double default_entropy_constant() {
  double c_med = 1.0 / (1.0 - std::sqrt(5.0 / 8.0));
  return 1.5 * c_med * c_med;
}

}  // namespace anneal
