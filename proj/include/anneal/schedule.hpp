#ifndef ANNEAL_SCHEDULE_HPP
#define ANNEAL_SCHEDULE_HPP

namespace anneal {

enum class ScheduleKind { logarithmic, constant, power };

/// Cooling schedule sigma(t). Logarithmic: c / ln(t + t_offset); constant:
/// c; power: c * (t + t_offset)^(-exponent).
struct Schedule {
  ScheduleKind kind = ScheduleKind::logarithmic;
  double c = 1.0;
  double t_offset = 2.718281828459045;  // >= e so sigma is finite from t = 0
  double exponent = 0.0;
};

struct SigmaValue {
  double sigma;
  double d_inv_sigma_dt;  // d(1/sigma)/dt, the quantity Prop.-style identities use
};

struct TuningPair {
  double delta;
  double r;
  double entropy_constant;
};

SigmaValue sigma_at(const Schedule& s, double t);

// delta_t = 1/(ln(t)^2 (ln ln t)^7), r_t = 1/(C ln(t)^2 (ln ln t)^8).
TuningPair tuning_parameters(double t, double entropy_constant);

// Default C: the Orlicz-entropy chain constant (3/2) * (1 - sqrt(5/8))^-2.
double default_entropy_constant();

}  // namespace anneal

#endif
