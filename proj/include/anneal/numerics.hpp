#ifndef ANNEAL_NUMERICS_HPP
#define ANNEAL_NUMERICS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

// Small shared numerical kernels: deterministic RNG streams, adaptive
// quadrature, bisection, golden-section search, tridiagonal solves and
// log-space accumulation.

namespace anneal {

constexpr double kInf = std::numeric_limits<double>::infinity();

// -------------------------------------------------------------------------
// RNG. mt19937_64 seeded through splitmix64 so that per-stream seeds derived
// from (seed, stream_index) are decorrelated. Normal variates use an explicit
// Box-Muller so results do not depend on the standard library's
// normal_distribution implementation.
// -------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    state_ = splitmix64(s);
    if (state_ == 0) state_ = 0x106689d45497fdb5ULL;
    have_spare_ = false;
  }

  std::uint64_t next_u64() {
    // xorshift64* core; period 2^64-1, plenty for desk-scale ensembles.
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545f4914f6cdd1dULL;
  }

  double uniform() {  // (0, 1)
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = uniform(), v = uniform();
    double r = std::sqrt(-2.0 * std::log(u));
    double th = 2.0 * M_PI * v;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// -------------------------------------------------------------------------
// Quadrature: adaptive Simpson with absolute+relative control.
// -------------------------------------------------------------------------

namespace detail {
inline double simpson(const std::function<double(double)>&, double a,
                      double fa, double b, double fb, double, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f,
                                   double a, double fa, double b, double fb,
                                   double m, double fm, double whole,
                                   double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(f, a, fa, m, fm, lm, flm);
  double right = simpson(f, m, fm, b, fb, rm, frm);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol,
                              depth - 1) +
         adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol,
                              depth - 1);
}
}  // namespace detail

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12, int max_depth = 48) {
  if (a == b) return 0.0;
  double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  double whole = detail::simpson(f, a, fa, b, fb, m, fm);
  double scale = std::max(std::abs(whole), 1e-300);
  return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole,
                                      tol * scale, max_depth);
}

// -------------------------------------------------------------------------
// Root finding / optimization.
// -------------------------------------------------------------------------

// Finds x in [lo, hi] with g(x) = target for non-decreasing g.
inline double bisect_increasing(const std::function<double(double)>& g,
                                double lo, double hi, double target,
                                double rel_tol = 1e-12, int iters = 200) {
  for (int i = 0; i < iters; ++i) {
    double mid = 0.5 * (lo + hi);
    if (g(mid) < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= rel_tol * (std::abs(lo) + std::abs(hi) + 1e-30)) break;
  }
  return 0.5 * (lo + hi);
}

// Golden-section minimizer on [a, b].
inline double golden_min(const std::function<double(double)>& f, double a,
                         double b, double tol = 1e-10, int iters = 200) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b));
       ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// -------------------------------------------------------------------------
// Tridiagonal solve (Thomas). Overwrites nothing; returns the solution of
// the system with diagonals (lower, diag, upper).
// -------------------------------------------------------------------------

inline std::vector<double> solve_tridiagonal(const std::vector<double>& lower,
                                             const std::vector<double>& diag,
                                             const std::vector<double>& upper,
                                             const std::vector<double>& rhs) {
  std::size_t n = diag.size();
  std::vector<double> cp(n), dp(n), x(n);
  cp[0] = upper[0] / diag[0];
  dp[0] = rhs[0] / diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    double m = diag[i] - lower[i] * cp[i - 1];
    cp[i] = (i + 1 < n) ? upper[i] / m : 0.0;
    dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / m;
  }
  x[n - 1] = dp[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
  return x;
}

// log(exp(a) + exp(b)) without overflow.
inline double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace anneal

#endif  // ANNEAL_NUMERICS_HPP
