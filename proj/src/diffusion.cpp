#include "jackflow/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jackflow/ensembles.hpp"
#include "jackflow/parallel.hpp"
#include "jackflow/rng.hpp"

namespace jackflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallest move the guard always allows: a few ulps of the coordinate. Below this
// a half-gap bound admits no representable step and the path would freeze.
inline double guard_limit(double gap, double v) {
  const double a = std::abs(v);
  return std::max(0.5 * gap, 4.0 * (std::nextafter(a, kInf) - a));
}

// Gaps below this are at the edge of double resolution; step control treats
// smaller gaps as this size.
inline double resolution_floor(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return 1e3 * (std::nextafter(m, kInf) - m);
}

// Flattened cone layout: level k (1-based) occupies [k(k−1)/2, k(k+1)/2).
inline std::size_t cone_index(int k, int i) {
  return static_cast<std::size_t>(k * (k - 1) / 2 + i);
}

struct DysonSystem {
  int n;
  double half_beta;

  std::size_t size() const { return static_cast<std::size_t>(n); }
  void drift(const std::vector<double>& x, std::vector<double>& b) const {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i) s += 1.0 / (x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)]);
      b[static_cast<std::size_t>(i)] = half_beta * s;
    }
  }
  bool admissible(const std::vector<double>& x) const {
    for (std::size_t i = 1; i < x.size(); ++i)
      if (!(x[i] > x[i - 1])) return false;
    return true;
  }
  void limits(const std::vector<double>& x, std::vector<double>& lim) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
      double g = kInf;
      if (i > 0) g = std::min(g, x[i] - x[i - 1]);
      if (i + 1 < x.size()) g = std::min(g, x[i + 1] - x[i]);
      lim[i] = guard_limit(g, x[i]);
    }
  }
  double nearest_gap(const std::vector<double>& x) const {
    double g = kInf;
    for (std::size_t i = 1; i < x.size(); ++i) g = std::min(g, x[i] - x[i - 1]);
    return g;
  }
  void monitor(const std::vector<double>& x, double t, double delta, StoppingRecord& rec) const {
    bool prev_close = false;
    for (std::size_t i = 1; i < x.size(); ++i) {
      const double g = x[i] - x[i - 1];
      rec.min_gap_seen = std::min(rec.min_gap_seen, g);
      const bool close = g <= delta;
      if (close && !rec.hat_tau_delta) rec.hat_tau_delta = t;
      if (close && prev_close && !rec.tau_delta) rec.tau_delta = t;
      prev_close = close;
    }
  }
};

struct MultiSystem {
  int n;
  double one_minus_theta;

  std::size_t size() const { return static_cast<std::size_t>(n * (n + 1) / 2); }
  double at(const std::vector<double>& y, int k, int i) const { return y[cone_index(k, i)]; }

  void drift(const std::vector<double>& y, std::vector<double>& b) const {
    for (int k = 1; k <= n; ++k) {
      for (int i = 0; i < k; ++i) {
        const double yi = at(y, k, i);
        double s = 0.0;
        for (int m = 0; m < k; ++m)
          if (m != i) s += 1.0 / (yi - at(y, k, m));
        for (int m = 0; m < k - 1; ++m) s -= 1.0 / (yi - at(y, k - 1, m));
        b[cone_index(k, i)] = one_minus_theta * s;
      }
    }
  }
  bool admissible(const std::vector<double>& y) const {
    for (int k = 1; k <= n; ++k) {
      for (int i = 0; i < k; ++i) {
        const double v = at(y, k, i);
        if (!std::isfinite(v)) return false;
        if (i > 0 && !(v > at(y, k, i - 1))) return false;
        if (k > 1) {
          if (i > 0 && !(v > at(y, k - 1, i - 1))) return false;
          if (i < k - 1 && !(v < at(y, k - 1, i))) return false;
        }
      }
    }
    return true;
  }
  void limits(const std::vector<double>& y, std::vector<double>& lim) const {
    for (int k = 1; k <= n; ++k) {
      for (int i = 0; i < k; ++i) {
        const double v = at(y, k, i);
        double g = kInf;
        if (i > 0) g = std::min(g, v - at(y, k, i - 1));
        if (i + 1 < k) g = std::min(g, at(y, k, i + 1) - v);
        if (k > 1) {
          if (i > 0) g = std::min(g, v - at(y, k - 1, i - 1));
          if (i < k - 1) g = std::min(g, at(y, k - 1, i) - v);
        }
        if (k < n) {
          g = std::min(g, v - at(y, k + 1, i));
          g = std::min(g, at(y, k + 1, i + 1) - v);
        }
        lim[cone_index(k, i)] = guard_limit(g, v);
      }
    }
  }
  double nearest_gap(const std::vector<double>& y) const {
    double g = kInf;
    for (int k = 1; k <= n; ++k) {
      for (int i = 0; i < k; ++i) {
        const double v = at(y, k, i);
        if (i > 0) g = std::min(g, v - at(y, k, i - 1));
        if (k > 1 && i > 0) g = std::min(g, v - at(y, k - 1, i - 1));
        if (k > 1 && i < k - 1) g = std::min(g, at(y, k - 1, i) - v);
      }
    }
    return g;
  }
  void monitor(const std::vector<double>& y, double t, double delta, StoppingRecord& rec) const {
    for (int k = 2; k <= n; ++k) {
      for (int i = 0; i < k; ++i) {
        const double v = at(y, k, i);
        if (i > 0) {
          const double g = v - at(y, k - 1, i - 1);
          rec.min_gap_seen = std::min(rec.min_gap_seen, g);
          if (g <= delta && !rec.hat_tau_delta) rec.hat_tau_delta = t;
        }
        if (i < k - 1) {
          const double g = at(y, k - 1, i) - v;
          rec.min_gap_seen = std::min(rec.min_gap_seen, g);
          if (g <= delta && !rec.hat_tau_delta) rec.hat_tau_delta = t;
        }
      }
    }
    if (rec.tau_delta || !rec.hat_tau_delta) return;
    // A particle with two distinct adjacent-level neighbours within δ.
    for (int k = 1; k <= n; ++k) {
      for (int i = 0; i < k; ++i) {
        const double v = at(y, k, i);
        int close = 0;
        if (k > 1 && i > 0 && v - at(y, k - 1, i - 1) <= delta) ++close;
        if (k > 1 && i < k - 1 && at(y, k - 1, i) - v <= delta) ++close;
        if (k < n && v - at(y, k + 1, i) <= delta) ++close;
        if (k < n && at(y, k + 1, i + 1) - v <= delta) ++close;
        if (close >= 2) {
          rec.tau_delta = t;
          return;
        }
      }
    }
  }
};

struct BesselSystem {
  double half_dim_minus_one;

  std::size_t size() const { return 1; }
  void drift(const std::vector<double>& x, std::vector<double>& b) const { b[0] = half_dim_minus_one / x[0]; }
  bool admissible(const std::vector<double>& x) const { return x[0] > 0.0 && std::isfinite(x[0]); }
  void limits(const std::vector<double>& x, std::vector<double>& lim) const { lim[0] = guard_limit(x[0], x[0]); }
  double nearest_gap(const std::vector<double>& x) const { return x[0]; }
  void monitor(const std::vector<double>&, double, double, StoppingRecord&) const {}
};

std::string dump(const std::vector<double>& x) {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ']';
  return os.str();
}

// Euler–Maruyama with a per-step guard. A rejected step is split in two halves
// whose Brownian increments are drawn from the bridge, so the driving path is
// unchanged by refinement. max_halvings bounds the consecutive rejections of one
// proposal; accepted pieces reset the count.
template <class Sys>
class GuardedStepper {
 public:
  GuardedStepper(const Sys& sys, Rng& rng, int max_halvings, double ratio, double delta, SdePath& out,
                 bool halt_on_gap = false)
      : sys_(sys),
        rng_(rng),
        max_halvings_(max_halvings),
        ratio_(ratio),
        delta_(delta),
        halt_on_gap_(halt_on_gap),
        out_(out) {
    const std::size_t d = sys.size();
    b_.resize(d);
    lim_.resize(d);
    trial_.resize(d);
  }

  bool halted() const { return halt_on_gap_ && out_.stopping.hat_tau_delta.has_value(); }

  void advance(std::vector<double>& x, double& t, double h) {
    const std::size_t d = x.size();
    const double sq = std::sqrt(h);
    hs_.assign(1, h);
    depths_.assign(1, 0);
    pool_.resize(d);
    for (std::size_t i = 0; i < d; ++i) pool_[i] = sq * normal_(rng_);
    int rejections = 0;
    while (!hs_.empty() && !halted()) {
      // Pop the next piece into cur_; the pool is a stack aligned with hs_.
      const double ph = hs_.back();
      const int depth = depths_.back();
      hs_.pop_back();
      depths_.pop_back();
      cur_.assign(pool_.end() - static_cast<std::ptrdiff_t>(d), pool_.end());
      pool_.resize(pool_.size() - d);
      const double g = std::max(sys_.nearest_gap(x), resolution_floor(x));
      if (ph > ratio_ * g * g && depth < kMaxDepth) {
        // Peel off a piece of exactly ratio·g²; the remainder is re-examined later.
        split(ph, ratio_ * g * g, depth + 1, depth);
        continue;
      }
      if (try_step(x, ph)) {
        t += ph;
        ++out_.accepted_steps;
        out_.deepest_halving = std::max(out_.deepest_halving, depth);
        sys_.monitor(x, t, delta_, out_.stopping);
        rejections = 0;
        continue;
      }
      ++out_.rejected_steps;
      if (++rejections > max_halvings_ || depth >= kMaxDepth) {
        throw StepUnderflow("step size underflow after " + std::to_string(rejections - 1) +
                                " consecutive halvings at t=" + std::to_string(t) + ", state " + dump(x),
                            t, x);
      }
      split(ph, 0.5 * ph, depth + 1, depth + 1);
    }
  }

 private:
  static constexpr int kMaxDepth = 1000;

  // Splits cur_ over [0, ph] at h1 by sampling the Brownian bridge; pushes the
  // remainder, then the first piece on top.
  void split(double ph, double h1, int first_depth, int second_depth) {
    const std::size_t d = cur_.size();
    const std::size_t base = pool_.size();
    pool_.resize(base + 2 * d);
    double* second = pool_.data() + base;
    double* first = second + d;
    const double h2 = ph - h1;
    const double w = h1 / ph;
    const double sd = std::sqrt(h1 * h2 / ph);
    for (std::size_t i = 0; i < d; ++i) {
      first[i] = w * cur_[i] + sd * normal_(rng_);
      second[i] = cur_[i] - first[i];
    }
    hs_.push_back(h2);
    depths_.push_back(second_depth);
    hs_.push_back(h1);
    depths_.push_back(first_depth);
  }

  bool try_step(std::vector<double>& x, double h) {
    sys_.drift(x, b_);
    sys_.limits(x, lim_);
    for (std::size_t i = 0; i < x.size(); ++i) {
      trial_[i] = x[i] + b_[i] * h + cur_[i];
      if (!(std::abs(trial_[i] - x[i]) <= lim_[i])) return false;
    }
    if (!sys_.admissible(trial_)) return false;
    x.swap(trial_);
    return true;
  }

  const Sys& sys_;
  Rng& rng_;
  int max_halvings_;
  double ratio_;
  double delta_;
  bool halt_on_gap_;
  SdePath& out_;
  std::normal_distribution<double> normal_;
  std::vector<double> b_, lim_, trial_, cur_, pool_, hs_;
  std::vector<int> depths_;
};

template <class Sys>
void run_path(const Sys& sys, const SdeConfig& cfg, std::vector<double> x, double t0, Rng& rng, SdePath& out,
              bool halt_on_gap = false) {
  if (!sys.admissible(x)) throw std::invalid_argument("initial condition is not in the open domain");
  out.start_time = t0;
  out.constraint_held = true;
  sys.monitor(x, t0, cfg.delta_stop, out.stopping);
  GuardedStepper<Sys> stepper(sys, rng, cfg.max_halvings, cfg.gap_step_ratio, cfg.delta_stop, out, halt_on_gap);
  std::vector<double> targets = cfg.snapshot_times;
  targets.push_back(cfg.t_end);
  double t = t0;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const double T = targets[k];
    while (t < T) {
      double h = std::min(cfg.dt, T - t);
      if (T - (t + h) < 1e-9 * cfg.dt) h = T - t;
      stepper.advance(x, t, h);
      if (!sys.admissible(x)) out.constraint_held = false;
      if (stepper.halted()) {
        out.halted_at = t;
        break;
      }
    }
    if (out.halted_at) {
      for (; k + 1 < targets.size(); ++k) out.snapshots.push_back(x);
      break;
    }
    t = std::max(t, T);
    if (k + 1 < targets.size()) out.snapshots.push_back(x);
  }
  out.final_state = std::move(x);
}

}  // namespace

void SdeConfig::validate() const {
  if (n < 1) throw std::invalid_argument("N must be at least 1");
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be nonnegative");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(delta_stop >= 0.0)) throw std::invalid_argument("delta must be nonnegative");
  if (max_halvings < 0) throw std::invalid_argument("max_halvings must be nonnegative");
  if (!(gap_step_ratio > 0.0)) throw std::invalid_argument("gap_step_ratio must be positive");
  for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
    if (!(snapshot_times[i] >= 0.0 && snapshot_times[i] <= t_end))
      throw std::invalid_argument("snapshot time outside [0, t_end]");
    if (i > 0 && snapshot_times[i] < snapshot_times[i - 1])
      throw std::invalid_argument("snapshot times must be nondecreasing");
  }
}

std::vector<double> dyson_drift(const WeylPoint& x, double beta) {
  const auto& c = x.coords;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      if (c[i] == c[j]) throw std::invalid_argument("coincident coordinates in Dyson drift");
  std::vector<double> b(c.size());
  DysonSystem{static_cast<int>(c.size()), beta / 2.0}.drift(c, b);
  return b;
}

ConePoint multilevel_drift(const ConePoint& y, Theta theta) {
  if (!y.interior()) throw std::invalid_argument("multilevel drift needs a point in the open cone");
  const int n = y.depth();
  const auto flat = y.flatten();
  std::vector<double> b(flat.size());
  MultiSystem{n, 1.0 - theta.value()}.drift(flat, b);
  return ConePoint::unflatten(n, b);
}

SdePath integrate_dyson(const SdeConfig& cfg) {
  cfg.validate();
  const auto* init = std::get_if<WeylPoint>(&cfg.initial);
  if (!init) throw std::invalid_argument("Dyson integration needs a WeylPoint initial condition");
  if (static_cast<int>(init->coords.size()) != cfg.n) throw std::invalid_argument("initial dimension differs from N");
  const DysonSystem sys{cfg.n, cfg.theta.beta() / 2.0};
  Rng rng(cfg.seed);
  SdePath out;
  std::vector<double> x = init->coords;
  double t0 = 0.0;
  const bool degenerate =
      cfg.n > 1 && std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
  if (degenerate && cfg.t_end > 0.0) {
    if (cfg.theta.beta() < 1.0) throw std::invalid_argument("degenerate Dyson start needs β ≥ 1");
    // The law at time dt₀ from a fully degenerate start is Hermite β with variance dt₀.
    t0 = std::min(cfg.warm_start > 0.0 ? cfg.warm_start : cfg.dt, cfg.t_end);
    const auto w = sample_hermite_tridiagonal(EnsembleParams(cfg.n, cfg.theta, t0), rng);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += w.coords[i];
  } else if (degenerate) {
    out.final_state = x;
    for (std::size_t i = 0; i < cfg.snapshot_times.size(); ++i) out.snapshots.push_back(x);
    return out;
  }
  run_path(sys, cfg, std::move(x), t0, rng, out);
  return out;
}

SdePath integrate_multilevel(const SdeConfig& cfg) {
  cfg.validate();
  const auto* init = std::get_if<ConePoint>(&cfg.initial);
  if (!init) throw std::invalid_argument("multilevel integration needs a ConePoint initial condition");
  if (init->depth() != cfg.n) throw std::invalid_argument("initial depth differs from N");
  if (cfg.theta.value() < 1.0)
    throw std::invalid_argument("multilevel SDE refuses θ < 1: local-time terms would be needed");
  if (!init->interior()) throw std::invalid_argument("multilevel initial condition must be in the open cone");
  const MultiSystem sys{cfg.n, 1.0 - cfg.theta.value()};
  Rng rng(cfg.seed);
  SdePath out;
  out.no_collision_guarantee = cfg.theta.value() < 2.0;
  run_path(sys, cfg, init->flatten(), 0.0, rng, out, cfg.theta.value() == 1.0);
  return out;
}

std::vector<SdePath> sde_batch(const SdeConfig& cfg, std::size_t paths, bool multilevel, int workers) {
  std::vector<SdePath> out(paths);
  parallel_for(paths, resolve_workers(workers), [&](std::size_t i) {
    SdeConfig c = cfg;
    c.seed = child_seed(cfg.seed, i);
    out[i] = multilevel ? integrate_multilevel(c) : integrate_dyson(c);
  });
  return out;
}

std::vector<double> bessel_step_reference(double dim, double x0, double t, double dt, std::uint64_t seed) {
  if (!(x0 > 0.0)) throw std::invalid_argument("Bessel start must be positive");
  if (!(dim > 1.0)) throw std::invalid_argument("Bessel dimension must exceed 1");
  if (!(dt > 0.0) || !(t >= 0.0)) throw std::invalid_argument("bad Bessel time grid");
  const BesselSystem sys{(dim - 1.0) / 2.0};
  Rng rng(seed);
  SdePath scratch;
  GuardedStepper<BesselSystem> stepper(sys, rng, 40, SdeConfig{}.gap_step_ratio, 0.0, scratch);
  std::vector<double> x{x0};
  std::vector<double> path{x0};
  double now = 0.0;
  while (now < t) {
    double h = std::min(dt, t - now);
    if (t - (now + h) < 1e-9 * dt) h = t - now;
    const double target = now + h;
    stepper.advance(x, now, h);
    now = target;
    path.push_back(x[0]);
  }
  return path;
}

}  // namespace jackflow
