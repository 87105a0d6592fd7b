#include "jackflow/ctmc.hpp"

#include <algorithm>
#include <limits>
#include <span>
#include <stdexcept>

#include "jackflow/jack.hpp"
#include "jackflow/parallel.hpp"

namespace jackflow {

void ChainConfig::validate() const {
  if (n < 1) throw std::invalid_argument("N must be at least 1");
  if (!(horizon_s >= 0.0)) throw std::invalid_argument("horizon must be nonnegative");
  for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
    const double s = snapshot_times[i];
    if (!(s >= 0.0 && s <= horizon_s)) throw std::invalid_argument("snapshot time outside [0, horizon]");
    if (i > 0 && s < snapshot_times[i - 1]) throw std::invalid_argument("snapshot times must be nondecreasing");
  }
  if (const auto* p = std::get_if<Partition>(&initial)) {
    if (static_cast<int>(p->length()) > n) throw std::invalid_argument("initial partition has more than N rows");
  } else {
    const auto& a = std::get<InterlacingArray>(initial);
    if (a.depth() != n) throw std::invalid_argument("initial array depth differs from N");
    if (!a.valid()) throw std::invalid_argument("initial array does not interlace");
  }
}

namespace {

// Shared event loop. `State` supplies rates, application of a chosen cell, and
// materialization of the current state as a ChainState.
template <class State>
Trajectory simulate(const ChainConfig& cfg, State& st) {
  Trajectory traj;
  traj.config = cfg;
  Rng rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto& snaps = cfg.snapshot_times;
  std::size_t next_snap = 0;
  double t = 0.0;
  for (;;) {
    const double total = st.total_rate();
    double t_next = std::numeric_limits<double>::infinity();
    if (total > 0.0) t_next = t + std::exponential_distribution<double>(total)(rng);
    while (next_snap < snaps.size() && snaps[next_snap] < t_next) {
      traj.snapshots.push_back(st.materialize());
      ++next_snap;
    }
    if (t_next > cfg.horizon_s) break;
    t = t_next;
    const double target = unif(rng) * total;
    st.fire(target, t, cfg.record_events ? &traj.events : nullptr, traj.event_count);
  }
  traj.final_state = st.materialize();
  return traj;
}

struct SingleState {
  int n;
  double theta;
  std::vector<int> rows;
  std::vector<double> rates;

  SingleState(const Partition& p, int n_, double th) : n(n_), theta(th), rows(p.padded(static_cast<std::size_t>(n_))) {
    rates.resize(static_cast<std::size_t>(n));
    refresh();
  }
  void refresh() {
    for (int i = 1; i <= n; ++i) rates[static_cast<std::size_t>(i - 1)] = rates::single(rows, i, theta);
  }
  double total_rate() const {
    double s = 0.0;
    for (double r : rates) s += r;
    return s;
  }
  void fire(double target, double t, std::vector<EventRecord>* log, std::uint64_t& count) {
    std::size_t pick = 0;
    double acc = 0.0;
    for (; pick + 1 < rates.size(); ++pick) {
      acc += rates[pick];
      if (target < acc && rates[pick] > 0.0) break;
    }
    while (rates[pick] == 0.0) --pick;  // rounding at the top end
    ++rows[pick];
    ++count;
    if (log) log->push_back({t, n, static_cast<int>(pick) + 1, false});
    refresh();
  }
  ChainState materialize() const { return Partition(rows); }
};

struct MultiState {
  int n;
  double theta;
  std::vector<std::vector<int>> levels;   // levels[k-1] has k entries
  std::vector<std::vector<double>> rates;  // own rates per (level, row)
  std::vector<double> level_totals;

  MultiState(const InterlacingArray& a, double th) : n(a.depth()), theta(th) {
    for (int k = 1; k <= n; ++k) {
      levels.push_back(a.level(k).padded(static_cast<std::size_t>(k)));
      rates.emplace_back(static_cast<std::size_t>(k), 0.0);
    }
    level_totals.assign(static_cast<std::size_t>(n), 0.0);
    for (int k = 1; k <= n; ++k) refresh(k);
  }
  void refresh(int k) {
    const auto ku = static_cast<std::size_t>(k - 1);
    const std::span<const int> upper(levels[ku]);
    const std::span<const int> lower = k > 1 ? std::span<const int>(levels[ku - 1]) : std::span<const int>();
    double s = 0.0;
    for (int i = 1; i <= k; ++i) {
      const double r = rates::multi(upper, lower, i, theta);
      rates[ku][static_cast<std::size_t>(i - 1)] = r;
      s += r;
    }
    level_totals[ku] = s;
  }
  double total_rate() const {
    double s = 0.0;
    for (double r : level_totals) s += r;
    return s;
  }
  void fire(double target, double t, std::vector<EventRecord>* log, std::uint64_t& count) {
    int level = 0, row = 0;
    double acc = 0.0;
    int last_k = 0, last_i = 0;
    for (int k = 1; k <= n && !level; ++k) {
      const auto& rk = rates[static_cast<std::size_t>(k - 1)];
      for (int i = 1; i <= k; ++i) {
        const double r = rk[static_cast<std::size_t>(i - 1)];
        if (r <= 0.0) continue;
        last_k = k;
        last_i = i;
        acc += r;
        if (target < acc) {
          level = k;
          row = i;
          break;
        }
      }
    }
    if (!level) {
      level = last_k;
      row = last_i;
    }
    const auto r = static_cast<std::size_t>(row - 1);
    ++levels[static_cast<std::size_t>(level - 1)][r];
    ++count;
    if (log) log->push_back({t, level, row, false});
    int top = level;
    // Push cascade: restore λ^{j-1}_i ≤ λ^j_i upward.
    for (int j = level + 1; j <= n; ++j) {
      auto& cur = levels[static_cast<std::size_t>(j - 1)];
      const auto& below = levels[static_cast<std::size_t>(j - 2)];
      if (cur[r] >= below[r]) break;
      ++cur[r];
      ++count;
      top = j;
      if (log) log->push_back({t, j, row, true});
    }
    for (int k = level; k <= std::min(n, top + 1); ++k) refresh(k);
  }
  ChainState materialize() const {
    std::vector<Partition> ps;
    ps.reserve(levels.size());
    for (const auto& l : levels) ps.emplace_back(l);
    return InterlacingArray(std::move(ps));
  }
};

}  // namespace

Trajectory run_single(const ChainConfig& cfg) {
  cfg.validate();
  if (cfg.multilevel()) throw std::invalid_argument("run_single needs a partition as initial state");
  SingleState st(std::get<Partition>(cfg.initial), cfg.n, cfg.theta.value());
  return simulate(cfg, st);
}

Trajectory run_multi(const ChainConfig& cfg) {
  cfg.validate();
  if (!cfg.multilevel()) throw std::invalid_argument("run_multi needs an interlacing array as initial state");
  MultiState st(std::get<InterlacingArray>(cfg.initial), cfg.theta.value());
  return simulate(cfg, st);
}

Trajectory run_chain(const ChainConfig& cfg) { return cfg.multilevel() ? run_multi(cfg) : run_single(cfg); }

ChainState state_at(const Trajectory& traj, double at_s) {
  const auto& cfg = traj.config;
  if (at_s > cfg.horizon_s) throw std::invalid_argument("requested time is beyond the horizon");
  if (at_s < 0.0) throw std::invalid_argument("requested time is negative");
  if (cfg.record_events) {
    if (const auto* p = std::get_if<Partition>(&cfg.initial)) {
      auto rows = p->padded(static_cast<std::size_t>(cfg.n));
      for (const auto& e : traj.events) {
        if (e.time > at_s) break;
        ++rows[static_cast<std::size_t>(e.row - 1)];
      }
      return Partition(std::move(rows));
    }
    auto arr = std::get<InterlacingArray>(cfg.initial);
    for (const auto& e : traj.events) {
      if (e.time > at_s) break;
      arr.add_box_unchecked(e.level, e.row);
    }
    return arr;
  }
  for (std::size_t i = 0; i < cfg.snapshot_times.size(); ++i)
    if (cfg.snapshot_times[i] == at_s) return traj.snapshots.at(i);
  if (at_s == cfg.horizon_s) return traj.final_state;
  throw std::invalid_argument("no event log or snapshot available at the requested time");
}

RescaledPoint rescale_state(const ChainState& state, const ScalingParams& p, int n) {
  if (const auto* part = std::get_if<Partition>(&state)) return WeylPoint{rescale_level(*part, p, n)};
  return rescale_array(std::get<InterlacingArray>(state), p);
}

RescaledPoint snapshot_rescaled(const Trajectory& traj, const ScalingParams& p, double at_s) {
  return rescale_state(state_at(traj, at_s), p, traj.config.n);
}

std::vector<Trajectory> batch(const ChainConfig& cfg, std::size_t paths, int workers) {
  if (paths < 1) throw std::invalid_argument("paths must be at least 1");
  cfg.validate();
  std::vector<Trajectory> out(paths);
  parallel_for(paths, resolve_workers(workers), [&](std::size_t i) {
    ChainConfig c = cfg;
    c.seed = child_seed(cfg.seed, i);
    out[i] = run_chain(c);
  });
  return out;
}

namespace {

void enumerate_rec(std::vector<Partition>& levels, int k, Theta theta, std::vector<WeightedArray>& out) {
  // levels[k..n-1] are fixed; fill level k (1-based) from level k+1.
  if (k == 0) {
    InterlacingArray arr(levels);
    const double w = jack_gibbs_weight(arr, theta).value();
    out.push_back({std::move(arr), w});
    return;
  }
  for (const auto& mu : interlacing_predecessors(levels[static_cast<std::size_t>(k)])) {
    if (static_cast<int>(mu.length()) > k) continue;
    levels[static_cast<std::size_t>(k - 1)] = mu;
    enumerate_rec(levels, k - 1, theta, out);
  }
}

}  // namespace

std::vector<WeightedArray> enumerate_jack_gibbs(const Partition& top, int n, Theta theta) {
  if (n < 1) throw std::invalid_argument("N must be at least 1");
  if (static_cast<int>(top.length()) > n) throw std::invalid_argument("top level has more than N rows");
  std::vector<Partition> levels(static_cast<std::size_t>(n));
  levels.back() = top;
  std::vector<WeightedArray> out;
  enumerate_rec(levels, n - 1, theta, out);
  return out;
}

InterlacingArray sample_jack_gibbs(const std::vector<WeightedArray>& table, Rng& rng) {
  if (table.empty()) throw std::invalid_argument("empty Jack–Gibbs table");
  double total = 0.0;
  for (const auto& w : table) total += w.weight;
  const double target = std::uniform_real_distribution<double>(0.0, total)(rng);
  double acc = 0.0;
  for (const auto& w : table) {
    acc += w.weight;
    if (target < acc) return w.array;
  }
  return table.back().array;
}

}  // namespace jackflow
