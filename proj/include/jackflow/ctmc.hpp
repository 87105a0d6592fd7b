#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "jackflow/combinatorics.hpp"
#include "jackflow/rng.hpp"
#include "jackflow/theta.hpp"

namespace jackflow {

using ChainState = std::variant<Partition, InterlacingArray>;

struct ChainConfig {
  int n = 1;
  Theta theta{1.0};
  double horizon_s = 0.0;
  std::uint64_t seed = 0;
  ChainState initial = Partition{};
  std::vector<double> snapshot_times;  // chain times s, nondecreasing, within [0, horizon_s]
  bool record_events = true;

  /// Throws std::invalid_argument on inconsistent fields.
  void validate() const;
  bool multilevel() const noexcept { return std::holds_alternative<InterlacingArray>(initial); }
};

struct EventRecord {
  double time = 0.0;
  int level = 1;
  int row = 1;
  bool pushed = false;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

struct Trajectory {
  ChainConfig config;
  std::vector<EventRecord> events;  // empty unless config.record_events
  ChainState final_state;
  std::vector<ChainState> snapshots;  // aligned with config.snapshot_times
  std::uint64_t event_count = 0;      // includes pushes
};

/// Exact event simulation of the one-level chain on Y^N. Events carry level = N.
Trajectory run_single(const ChainConfig& cfg);
/// Exact event simulation of the multilevel chain with block/push interactions.
Trajectory run_multi(const ChainConfig& cfg);
/// Dispatches on the type of cfg.initial.
Trajectory run_chain(const ChainConfig& cfg);

/// State at chain time at_s, by replaying the event log or reading a stored snapshot.
ChainState state_at(const Trajectory& traj, double at_s);

using RescaledPoint = std::variant<WeylPoint, ConePoint>;
RescaledPoint snapshot_rescaled(const Trajectory& traj, const ScalingParams& p, double at_s);
RescaledPoint rescale_state(const ChainState& state, const ScalingParams& p, int n);

/// Runs `paths` trajectories; path i uses seed child_seed(cfg.seed, i). Output is
/// identical for every worker count.
std::vector<Trajectory> batch(const ChainConfig& cfg, std::size_t paths, int workers = 0);

struct WeightedArray {
  InterlacingArray array;
  double weight = 0.0;
};
/// All arrays with the given top level and their Jack–Gibbs weights (sum to 1).
std::vector<WeightedArray> enumerate_jack_gibbs(const Partition& top, int n, Theta theta);
/// Exact draw from the enumerated Jack–Gibbs conditional law.
InterlacingArray sample_jack_gibbs(const std::vector<WeightedArray>& table, Rng& rng);

}  // namespace jackflow
