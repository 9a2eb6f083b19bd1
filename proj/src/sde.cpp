#include "anneal/sde.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace anneal {
namespace {

// Per-thread partial sums, combined later in fixed block order so the
// reduction is independent of thread scheduling.
struct Accum {
  std::vector<double> sum_v, sum_v2, sum_v_sq, sum_v2_sq;
  std::vector<std::vector<double>> succ;  // [time][radius]
  std::vector<std::vector<double>> hist;  // [time][bin]
  long clamp = 0;

  Accum(std::size_t nt, std::size_t nr, std::size_t nb)
      : sum_v(nt, 0.0),
        sum_v2(nt, 0.0),
        sum_v_sq(nt, 0.0),
        sum_v2_sq(nt, 0.0),
        succ(nt, std::vector<double>(nr, 0.0)),
        hist(nt, std::vector<double>(nb, 0.0)) {}

  void merge(const Accum& o) {
    for (std::size_t k = 0; k < sum_v.size(); ++k) {
      sum_v[k] += o.sum_v[k];
      sum_v2[k] += o.sum_v2[k];
      sum_v_sq[k] += o.sum_v_sq[k];
      sum_v2_sq[k] += o.sum_v2_sq[k];
      for (std::size_t r = 0; r < succ[k].size(); ++r)
        succ[k][r] += o.succ[k][r];
      for (std::size_t b = 0; b < hist[k].size(); ++b)
        hist[k][b] += o.hist[k][b];
    }
    clamp += o.clamp;
  }
};

}  // namespace

Vec sample_initial(const InitSampler& init, int dimension, Rng& rng) {
  switch (init.kind) {
    case InitSampler::Kind::point:
      if (static_cast<int>(init.point.size()) != dimension)
        throw std::invalid_argument("sample_initial: point dimension mismatch");
      return init.point;
    case InitSampler::Kind::uniform_box: {
      if (static_cast<int>(init.box.lo.size()) != dimension)
        throw std::invalid_argument("sample_initial: box dimension mismatch");
      Vec x(dimension);
      for (int k = 0; k < dimension; ++k)
        x[k] = rng.uniform(init.box.lo[k], init.box.hi[k]);
      return x;
    }
    case InitSampler::Kind::density1d: {
      if (dimension != 1)
        throw std::invalid_argument("sample_initial: density1d is 1D only");
      const auto& w = init.cell_weights;
      if (w.empty() || init.hi <= init.lo)
        throw std::invalid_argument("sample_initial: bad density1d spec");
      double total = 0.0;
      for (double wi : w) {
        if (wi < 0.0)
          throw std::invalid_argument("sample_initial: negative cell weight");
        total += wi;
      }
      if (total <= 0.0)
        throw std::invalid_argument("sample_initial: zero-mass density");
      double u = rng.uniform() * total;
      double acc = 0.0;
      double h = (init.hi - init.lo) / static_cast<double>(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (u <= acc + w[i] || i + 1 == w.size()) {
          double frac = w[i] > 0.0 ? (u - acc) / w[i] : 0.5;
          frac = std::clamp(frac, 0.0, 1.0);
          return {init.lo + (static_cast<double>(i) + frac) * h};
        }
        acc += w[i];
      }
      return {init.hi};
    }
  }
  throw std::logic_error("sample_initial: unknown kind");
}

ObservableSeries simulate_ensemble(const EnsembleRun& run,
                                   const std::vector<double>& record_times,
                                   const std::vector<double>& radii,
                                   const Histogram& hist, int n_threads) {
  if (run.n_traj < 1) throw std::invalid_argument("simulate_ensemble: n_traj < 1");
  if (run.dt0 <= 0.0) throw std::invalid_argument("simulate_ensemble: dt0 <= 0");
  for (std::size_t i = 0; i < record_times.size(); ++i) {
    if (record_times[i] < run.t0 - 1e-12 ||
        record_times[i] > run.t_end + 1e-12)
      throw std::invalid_argument("simulate_ensemble: record time out of range");
    if (i > 0 && record_times[i] <= record_times[i - 1])
      throw std::invalid_argument("simulate_ensemble: record times not sorted");
  }

  const int d = run.potential.dimension;
  const std::size_t nt = record_times.size();
  const std::size_t nr = radii.size();
  const std::size_t nb = d == 1 ? static_cast<std::size_t>(hist.bins) : 0;

  std::string abort_msg;
  std::atomic<bool> aborted{false};

  auto run_block = [&](int j_begin, int j_end, Accum& acc) {
    for (int j = j_begin; j < j_end && !aborted.load(); ++j) {
      Rng rng(run.seed, static_cast<std::uint64_t>(j));
      Vec x = sample_initial(run.init, d, rng);
      double t = run.t0;
      double dt_cur = run.dt0;
      std::size_t next_rec = 0;

      auto record_state = [&](std::size_t k) {
        double v = run.potential.value(x);
        acc.sum_v[k] += v;
        acc.sum_v2[k] += v * v;
        acc.sum_v_sq[k] += v * v;
        acc.sum_v2_sq[k] += v * v * v * v;
        double dist2 = 0.0;
        for (int a = 0; a < d; ++a) {
          double dd = x[a] - run.potential.argmin[a];
          dist2 += dd * dd;
        }
        double dist = std::sqrt(dist2);
        for (std::size_t r = 0; r < nr; ++r)
          if (dist <= radii[r]) acc.succ[k][r] += 1.0;
        if (nb > 0) {
          double bw = (hist.hi - hist.lo) / hist.bins;
          int bin = static_cast<int>(std::floor((x[0] - hist.lo) / bw));
          bin = std::clamp(bin, 0, hist.bins - 1);
          acc.hist[k][bin] += 1.0;
        }
      };

      while (next_rec < nt && record_times[next_rec] <= t + 1e-12) {
        record_state(next_rec);
        ++next_rec;
      }

      while (t < run.t_end - 1e-12) {
        double dt = std::min(dt_cur, run.dt_max);
        if (next_rec < nt && t + dt > record_times[next_rec] - 1e-12)
          dt = record_times[next_rec] - t;
        if (t + dt > run.t_end) dt = run.t_end - t;
        if (dt <= 0.0) {
          if (next_rec < nt) {
            record_state(next_rec);
            ++next_rec;
          }
          continue;
        }
        double sig = sigma_at(run.schedule, t).sigma;  // left endpoint (Ito)
        Vec grad = run.potential.gradient(x);
        double amp = std::sqrt(std::max(sig, 0.0) * dt);
        bool finite = true;
        for (int a = 0; a < d; ++a) {
          x[a] += -0.5 * grad[a] * dt + amp * rng.normal();
          if (!std::isfinite(x[a])) finite = false;
          if (x[a] > run.clamp_radius) {
            x[a] = 2.0 * run.clamp_radius - x[a];
            ++acc.clamp;
          } else if (x[a] < -run.clamp_radius) {
            x[a] = -2.0 * run.clamp_radius - x[a];
            ++acc.clamp;
          }
        }
        if (!finite) {
          std::ostringstream os;
          os << "simulate_ensemble: non-finite state at t=" << t
             << " trajectory=" << j;
          abort_msg = os.str();
          aborted.store(true);
          return;
        }
        t += dt;
        while (next_rec < nt && record_times[next_rec] <= t + 1e-12) {
          record_state(next_rec);
          ++next_rec;
        }
        dt_cur = std::min(dt_cur * run.dt_growth, run.dt_max);
      }
    }
  };

  int threads = std::max(1, n_threads);
  threads = std::min(threads, run.n_traj);
  std::vector<Accum> parts(threads, Accum(nt, nr, nb));
  if (threads == 1) {
    run_block(0, run.n_traj, parts[0]);
  } else {
    std::vector<std::thread> pool;
    int per = (run.n_traj + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
      int b = w * per, e = std::min(run.n_traj, b + per);
      if (b >= e) break;
      pool.emplace_back([&, b, e, w] { run_block(b, e, parts[w]); });
    }
    for (auto& th : pool) th.join();
  }
  if (aborted.load()) throw std::runtime_error(abort_msg);

  Accum total(nt, nr, nb);
  for (const auto& p : parts) total.merge(p);

  ObservableSeries out;
  out.times = record_times;
  out.radii = radii;
  out.hist_spec = hist;
  out.n_traj = run.n_traj;
  out.clamp_count = total.clamp;
  const double n = static_cast<double>(run.n_traj);
  out.mean_v.resize(nt);
  out.mean_v2.resize(nt);
  out.se_v.resize(nt);
  out.se_v2.resize(nt);
  out.success.assign(nt, std::vector<double>(nr, 0.0));
  if (nb > 0) out.hist.assign(nt, std::vector<double>(nb, 0.0));
  for (std::size_t k = 0; k < nt; ++k) {
    out.mean_v[k] = total.sum_v[k] / n;
    out.mean_v2[k] = total.sum_v2[k] / n;
    double var_v = std::max(0.0, total.sum_v_sq[k] / n - out.mean_v[k] * out.mean_v[k]);
    double var_v2 =
        std::max(0.0, total.sum_v2_sq[k] / n - out.mean_v2[k] * out.mean_v2[k]);
    out.se_v[k] = std::sqrt(var_v / n);
    out.se_v2[k] = std::sqrt(var_v2 / n);
    for (std::size_t r = 0; r < nr; ++r)
      out.success[k][r] = total.succ[k][r] / n;
    for (std::size_t b = 0; b < nb; ++b) out.hist[k][b] = total.hist[k][b] / n;
  }
  return out;
}

double success_fraction(const ObservableSeries& series, double radius,
                        double t) {
  if (std::isinf(radius) && radius > 0.0) return 1.0;
  std::size_t k = series.times.size();
  for (std::size_t i = 0; i < series.times.size(); ++i)
    if (std::abs(series.times[i] - t) <= 1e-9 * (1.0 + std::abs(t))) {
      k = i;
      break;
    }
  if (k == series.times.size())
    throw std::invalid_argument("success_fraction: t not recorded");
  for (std::size_t r = 0; r < series.radii.size(); ++r)
    if (std::abs(series.radii[r] - radius) <= 1e-12 * (1.0 + radius))
      return series.success[k][r];
  throw std::invalid_argument("success_fraction: radius not recorded");
}

}  // namespace anneal
