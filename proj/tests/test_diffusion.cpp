#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "jackflow/diffusion.hpp"
#include "jackflow/ensembles.hpp"
#include "jackflow/rng.hpp"

using namespace jackflow;

namespace {

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double std_error(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / (v.size() - 1) / v.size());
}

double sum_sq(const std::vector<double>& v, std::size_t from = 0) {
  double s = 0.0;
  for (std::size_t i = from; i < v.size(); ++i) s += v[i] * v[i];
  return s;
}

ConePoint corners_start(int n, Theta theta, double t, std::uint64_t seed) {
  Rng rng(seed);
  const auto top = sample_hermite_tridiagonal(EnsembleParams(n, theta, t), rng);
  return sample_corners_given_top(top, theta, rng, nullptr);
}

}  // namespace

TEST(DysonDrift, WorkedExamples) {
  EXPECT_EQ(dyson_drift(WeylPoint{{0.7}}, 2.0), (std::vector<double>{0.0}));
  const auto two = dyson_drift(WeylPoint{{-0.5, 0.5}}, 3.0);
  EXPECT_NEAR(two[0], -3.0 / 2.0, 1e-15);
  EXPECT_NEAR(two[1], 3.0 / 2.0, 1e-15);
  const auto three = dyson_drift(WeylPoint{{-1.0, 0.0, 1.0}}, 2.0);
  EXPECT_NEAR(three[0], -1.5, 1e-15);
  EXPECT_NEAR(three[1], 0.0, 1e-15);
  EXPECT_NEAR(three[2], 1.5, 1e-15);
  EXPECT_THROW(dyson_drift(WeylPoint{{0.0, 0.0}}, 2.0), std::invalid_argument);
}

TEST(DysonDrift, SumsToZeroAndIsAntisymmetric) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> z;
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 2 + rep % 6;
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& v : x) v = z(rng);
    std::sort(x.begin(), x.end());
    const double beta = 0.5 + rep % 4;
    const auto b = dyson_drift(WeylPoint{x}, beta);
    double total = 0.0, scale = 0.0;
    for (double v : b) total += v, scale += std::abs(v);
    EXPECT_LE(std::abs(total), 1e-12 * scale);
    std::vector<double> r(x.rbegin(), x.rend());
    for (auto& v : r) v = -v;
    const auto br = dyson_drift(WeylPoint{r}, beta);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(br[x.size() - 1 - i], -b[i], 1e-12 * scale);
  }
}

TEST(MultilevelDrift, WorkedExamples) {
  const double a = 0.8;
  for (double th : {0.5, 1.0, 2.0, 3.5}) {
    const auto d = multilevel_drift(ConePoint{{{0.0}, {-a, a}}}, Theta(th));
    EXPECT_EQ(d.levels[0][0], 0.0);
    EXPECT_NEAR(d.levels[1][0], (1 - th) / (2 * a), 1e-14);
    EXPECT_NEAR(d.levels[1][1], -(1 - th) / (2 * a), 1e-14);
  }
  const auto y = corners_start(4, Theta(1.5), 1.0, 3);
  for (const auto& level : multilevel_drift(y, Theta(1.0)).levels)
    for (double v : level) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(multilevel_drift(ConePoint{{{0.0}, {0.0, 1.0}}}, Theta(2.0)), std::invalid_argument);
}

TEST(Bessel, StartsAtX0AndMatchesSecondMoment) {
  EXPECT_EQ(bessel_step_reference(3.0, 0.7, 0.0, 0.01, 1), (std::vector<double>{0.7}));
  const double x0 = 0.5, t = 1.0;
  std::vector<double> r2;
  for (std::uint64_t s = 0; s < 4000; ++s) {
    const auto path = bessel_step_reference(3.0, x0, t, 0.01, child_seed(5, s));
    EXPECT_EQ(path.size(), 101u);
    r2.push_back(path.back() * path.back());
  }
  EXPECT_NEAR(mean(r2), x0 * x0 + 3 * t, 3 * std_error(r2));
}

TEST(Bessel, RefinementKeepsTheLaw) {
  std::vector<double> coarse, fine;
  for (std::uint64_t s = 0; s < 3000; ++s) {
    coarse.push_back(bessel_step_reference(3.0, 0.3, 0.5, 0.02, child_seed(7, s)).back());
    fine.push_back(bessel_step_reference(3.0, 0.3, 0.5, 0.002, child_seed(8, s)).back());
  }
  std::sort(coarse.begin(), coarse.end());
  std::sort(fine.begin(), fine.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < coarse.size() && j < fine.size()) {
    const double x = std::min(coarse[i], fine[j]);
    while (i < coarse.size() && coarse[i] == x) ++i;
    while (j < fine.size() && fine[j] == x) ++j;
    d = std::max(d, std::abs(double(i) / coarse.size() - double(j) / fine.size()));
  }
  EXPECT_LE(d, 0.05);
}

TEST(IntegrateDyson, ZeroHorizonReturnsInitial) {
  SdeConfig cfg;
  cfg.n = 3;
  cfg.theta = Theta(1.0);
  cfg.t_end = 0.0;
  cfg.initial = WeylPoint{{-1.0, 0.2, 1.0}};
  const auto path = integrate_dyson(cfg);
  EXPECT_EQ(path.final_state, (std::vector<double>{-1.0, 0.2, 1.0}));
  EXPECT_EQ(path.accepted_steps, 0u);
}

TEST(IntegrateDyson, ItoMomentFromZero) {
  SdeConfig cfg;
  cfg.n = 3;
  cfg.theta = Theta::from_beta(2.0);
  cfg.t_end = 1.0;
  cfg.dt = 2e-3;
  cfg.seed = 21;
  cfg.initial = WeylPoint{{0.0, 0.0, 0.0}};
  cfg.snapshot_times = {0.5};
  const auto paths = sde_batch(cfg, 2000, false, 0);
  std::vector<double> half, full;
  for (const auto& p : paths) {
    EXPECT_TRUE(p.constraint_held);
    EXPECT_GT(p.start_time, 0.0);
    ASSERT_EQ(p.snapshots.size(), 1u);
    half.push_back(sum_sq(p.snapshots[0]));
    full.push_back(sum_sq(p.final_state));
  }
  EXPECT_NEAR(mean(half), 4.5, 3 * std_error(half));
  EXPECT_NEAR(mean(full), 9.0, 3 * std_error(full));
}

TEST(IntegrateDyson, DegenerateStartNeedsBetaAtLeastOne) {
  SdeConfig cfg;
  cfg.n = 2;
  cfg.theta = Theta::from_beta(0.5);
  cfg.initial = WeylPoint{{0.0, 0.0}};
  EXPECT_THROW(integrate_dyson(cfg), std::invalid_argument);
  cfg.initial = WeylPoint{{0.0, 0.0, 1.0}};
  cfg.n = 3;
  EXPECT_THROW(integrate_dyson(cfg), std::invalid_argument);
}

TEST(IntegrateDyson, DeterministicAcrossWorkerCounts) {
  SdeConfig cfg;
  cfg.n = 4;
  cfg.theta = Theta(1.0);
  cfg.t_end = 0.2;
  cfg.seed = 99;
  cfg.initial = WeylPoint{{-1.0, -0.5, 0.5, 1.0}};
  const auto a = sde_batch(cfg, 16, false, 1);
  const auto b = sde_batch(cfg, 16, false, 3);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].final_state, b[i].final_state);
}

TEST(IntegrateDyson, UnderflowReportsState) {
  SdeConfig cfg;
  cfg.n = 2;
  cfg.theta = Theta::from_beta(0.2);
  cfg.t_end = 5.0;
  cfg.dt = 0.5;
  cfg.max_halvings = 0;
  cfg.initial = WeylPoint{{-1e-3, 1e-3}};
  bool thrown = false;
  for (std::uint64_t s = 0; s < 20 && !thrown; ++s) {
    cfg.seed = s;
    try {
      integrate_dyson(cfg);
    } catch (const StepUnderflow& e) {
      thrown = true;
      EXPECT_EQ(e.state().size(), 2u);
      EXPECT_NE(std::string(e.what()).find("state"), std::string::npos);
    }
  }
  EXPECT_TRUE(thrown);
}

TEST(IntegrateMultilevel, RefusesThetaBelowOneAndFlagsWeakRepulsion) {
  SdeConfig cfg;
  cfg.n = 2;
  cfg.t_end = 0.1;
  cfg.initial = ConePoint{{{0.0}, {-1.0, 1.0}}};
  cfg.theta = Theta(0.5);
  EXPECT_THROW(integrate_multilevel(cfg), std::invalid_argument);
  cfg.theta = Theta(1.5);
  EXPECT_TRUE(integrate_multilevel(cfg).no_collision_guarantee);
  cfg.theta = Theta(2.0);
  EXPECT_FALSE(integrate_multilevel(cfg).no_collision_guarantee);
  cfg.initial = ConePoint{{{1.0}, {-1.0, 1.0}}};
  EXPECT_THROW(integrate_multilevel(cfg), std::invalid_argument);
}

TEST(IntegrateMultilevel, ThetaOneIsDriftlessUntilGapEvent) {
  SdeConfig cfg;
  cfg.n = 2;
  cfg.theta = Theta(1.0);
  cfg.t_end = 0.05;
  cfg.dt = 1e-3;
  cfg.delta_stop = 1e-4;
  cfg.initial = ConePoint{{{0.0}, {-3.0, 3.0}}};
  std::vector<double> incr;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    cfg.seed = child_seed(4, s);
    const auto p = integrate_multilevel(cfg);
    EXPECT_FALSE(p.halted_at.has_value());
    incr.push_back(p.final_state[1] + 3.0);
  }
  EXPECT_NEAR(mean(incr), 0.0, 3 * std_error(incr));
  cfg.initial = ConePoint{{{0.0}, {-0.01, 0.01}}};
  cfg.t_end = 1.0;
  cfg.seed = 1;
  const auto p = integrate_multilevel(cfg);
  ASSERT_TRUE(p.halted_at.has_value());
  EXPECT_EQ(*p.halted_at, *p.stopping.hat_tau_delta);
}

TEST(IntegrateMultilevel, ItoMomentAtTopLevelAndMonitorOrder) {
  const Theta theta(2.0);
  SdeConfig cfg;
  cfg.n = 3;
  cfg.theta = theta;
  cfg.t_end = 0.5;
  cfg.dt = 2e-3;
  std::vector<double> incr;
  for (std::uint64_t s = 0; s < 800; ++s) {
    cfg.initial = corners_start(3, theta, 1.0, child_seed(30, s));
    cfg.seed = child_seed(31, s);
    const auto before = std::get<ConePoint>(cfg.initial).flatten();
    const auto p = integrate_multilevel(cfg);
    EXPECT_TRUE(p.constraint_held);
    if (p.stopping.tau_delta) {
      ASSERT_TRUE(p.stopping.hat_tau_delta.has_value());
      EXPECT_LE(*p.stopping.hat_tau_delta, *p.stopping.tau_delta);
    }
    EXPECT_GT(p.stopping.min_gap_seen, 0.0);
    incr.push_back(sum_sq(p.final_state, 3) - sum_sq(before, 3));
  }
  EXPECT_NEAR(mean(incr), 7.5, 3 * std_error(incr));
}

TEST(SdeConfig, RejectsBadInputs) {
  SdeConfig cfg;
  cfg.dt = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.dt = 1e-3;
  cfg.snapshot_times = {2.0};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}
