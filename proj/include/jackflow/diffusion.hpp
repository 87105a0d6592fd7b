#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "jackflow/combinatorics.hpp"
#include "jackflow/theta.hpp"

namespace jackflow {

struct SdeConfig {
  int n = 1;
  Theta theta{1.0};  // β = 2θ for the Dyson equation
  double t_end = 1.0;
  double dt = 1e-3;
  std::uint64_t seed = 0;
  double delta_stop = 1e-4;
  std::variant<WeylPoint, ConePoint> initial = WeylPoint{};
  std::vector<double> snapshot_times;  // within [0, t_end]
  double warm_start = 0.0;             // dt₀ for a degenerate Dyson start; 0 means dt
  int max_halvings = 40;
  double gap_step_ratio = 0.01;        // pieces are split until h ≤ ratio · (nearest gap)²

  void validate() const;
};

struct StoppingRecord {
  std::optional<double> tau_delta;      // three particles on adjacent levels within δ
  std::optional<double> hat_tau_delta;  // two particles on adjacent levels within δ
  double min_gap_seen = std::numeric_limits<double>::infinity();
};

struct SdePath {
  std::vector<std::vector<double>> snapshots;  // flattened state at each snapshot time
  std::vector<double> final_state;             // flattened state at t_end
  StoppingRecord stopping;
  std::uint64_t accepted_steps = 0;
  std::uint64_t rejected_steps = 0;
  int deepest_halving = 0;
  bool constraint_held = true;          // ordering / cone membership after every accepted step
  bool no_collision_guarantee = false;  // multilevel with 1 < θ < 2
  double start_time = 0.0;              // > 0 after a warm start
  std::optional<double> halted_at;      // θ = 1 multilevel runs stop at the first δ-gap event
};

/// Raised when a step has been halved max_halvings times without being accepted.
class StepUnderflow : public std::runtime_error {
 public:
  StepUnderflow(const std::string& what, double time, std::vector<double> state)
      : std::runtime_error(what), time_(time), state_(std::move(state)) {}
  double time() const noexcept { return time_; }
  const std::vector<double>& state() const noexcept { return state_; }

 private:
  double time_;
  std::vector<double> state_;
};

/// b_i = (β/2) Σ_{j≠i} 1/(x_i − x_j). Throws on coincident coordinates.
std::vector<double> dyson_drift(const WeylPoint& x, double beta);
/// Drift of the interlaced system; level 1 is zero. Throws off the open cone.
ConePoint multilevel_drift(const ConePoint& y, Theta theta);

/// Guarded Euler–Maruyama for β-Dyson Brownian motion, β = 2θ.
SdePath integrate_dyson(const SdeConfig& cfg);
/// Guarded Euler–Maruyama for the interlaced multilevel system. Refuses θ < 1; at θ = 1
/// the drift vanishes and the run halts at the first δ-gap event.
SdePath integrate_multilevel(const SdeConfig& cfg);

/// Paths i = 0..paths−1 with seeds child_seed(cfg.seed, i); identical for any worker count.
std::vector<SdePath> sde_batch(const SdeConfig& cfg, std::size_t paths, bool multilevel, int workers = 0);

/// Bessel process dR = (dim−1)/(2R) dt + dW on the shared guarded kernel.
/// Returns R at times 0, dt, 2dt, …, t (last step shortened if needed).
std::vector<double> bessel_step_reference(double dim, double x0, double t, double dt, std::uint64_t seed);

}  // namespace jackflow
