#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "jackflow/ctmc.hpp"
#include "jackflow/jack.hpp"

using namespace jackflow;

namespace {

ChainConfig single_cfg(int n, double theta, double s, std::uint64_t seed) {
  ChainConfig c;
  c.n = n;
  c.theta = Theta(theta);
  c.horizon_s = s;
  c.seed = seed;
  c.initial = Partition{};
  return c;
}

ChainConfig multi_cfg(int n, double theta, double s, std::uint64_t seed) {
  ChainConfig c = single_cfg(n, theta, s, seed);
  c.initial = InterlacingArray::empty(n);
  return c;
}

double mean_of(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double var_of(const std::vector<double>& x) {
  const double m = mean_of(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

int final_size(const Trajectory& t) {
  if (const auto* p = std::get_if<Partition>(&t.final_state)) return p->size();
  const auto& a = std::get<InterlacingArray>(t.final_state);
  return a.level(a.depth()).size();
}

}  // namespace

TEST(RunSingle, ZeroHorizonHasNoEvents) {
  auto c = single_cfg(3, 1.0, 0.0, 1);
  c.initial = Partition{2, 1};
  const auto t = run_single(c);
  EXPECT_TRUE(t.events.empty());
  EXPECT_EQ(std::get<Partition>(t.final_state), (Partition{2, 1}));
  const auto m = run_multi(multi_cfg(3, 1.0, 0.0, 1));
  EXPECT_TRUE(m.events.empty());
  EXPECT_EQ(std::get<InterlacingArray>(m.final_state), InterlacingArray::empty(3));
}

TEST(RunSingle, RejectsInconsistentConfig) {
  auto c = single_cfg(1, 1.0, 1.0, 1);
  c.initial = Partition{1, 1};
  EXPECT_THROW(run_single(c), std::invalid_argument);
  auto d = single_cfg(2, 1.0, 1.0, 1);
  d.snapshot_times = {2.0};
  EXPECT_THROW(run_single(d), std::invalid_argument);
  EXPECT_THROW(run_multi(single_cfg(2, 1.0, 1.0, 1)), std::invalid_argument);
}

TEST(RunSingle, SizeIsPoissonForOneRow) {
  std::vector<double> sizes;
  for (const auto& t : batch(single_cfg(1, 2.0, 5.0, 42), 10000)) sizes.push_back(final_size(t));
  const double se = std::sqrt(10.0 / sizes.size());
  EXPECT_NEAR(mean_of(sizes), 10.0, 3 * se);
  EXPECT_NEAR(var_of(sizes) / mean_of(sizes), 1.0, 0.1);
}

TEST(RunSingle, FixedTimeLawMatchesJackMeasure) {
  const int n = 3;
  const double s = 1.5;
  const Theta th(1.0);
  std::vector<std::pair<Partition, double>> table;
  for (int m = 0; m <= 14; ++m)
    for (const auto& lam : partitions_of(m, n)) table.emplace_back(lam, jack_measure_log(lam, n, s, th).value());
  std::sort(table.begin(), table.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  table.resize(20);

  const std::size_t paths = 20000;
  std::map<Partition, double> counts;
  for (const auto& t : batch(single_cfg(n, 1.0, s, 3), paths)) counts[std::get<Partition>(t.final_state)] += 1;
  double chi2 = 0.0, rest_obs = static_cast<double>(paths), rest_exp = static_cast<double>(paths);
  for (const auto& [lam, p] : table) {
    const double e = p * paths, o = counts[lam];
    chi2 += (o - e) * (o - e) / e;
    rest_obs -= o;
    rest_exp -= e;
  }
  chi2 += (rest_obs - rest_exp) * (rest_obs - rest_exp) / rest_exp;
  // 21 cells, 20 degrees of freedom; 0.999 quantile is 45.31.
  EXPECT_LT(chi2, 45.31);
}

TEST(RunSingle, EventsAreTimeOrderedAndReplay) {
  auto c = single_cfg(4, 0.7, 30.0, 9);
  c.snapshot_times = {0.0, 10.0, 30.0};
  const auto t = run_single(c);
  ASSERT_FALSE(t.events.empty());
  for (std::size_t i = 1; i < t.events.size(); ++i) EXPECT_LE(t.events[i - 1].time, t.events[i].time);
  for (const auto& e : t.events) {
    EXPECT_EQ(e.level, 4);
    EXPECT_GE(e.row, 1);
    EXPECT_LE(e.row, 4);
    EXPECT_FALSE(e.pushed);
  }
  EXPECT_EQ(state_at(t, 30.0), t.final_state);
  EXPECT_EQ(state_at(t, 10.0), t.snapshots[1]);
  EXPECT_EQ(std::get<Partition>(t.snapshots[0]), Partition{});
  EXPECT_THROW(state_at(t, 31.0), std::invalid_argument);
}

TEST(RunMulti, InterlacingHoldsAfterEveryEventGroup) {
  for (int n = 1; n <= 5; ++n) {
    for (double th : {0.5, 1.0, 2.5}) {
      for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto t = run_multi(multi_cfg(n, th, 1000.0 / (n * (n + 1) / 2.0 * th), seed));
        ASSERT_GE(t.events.size(), 500u);
        auto arr = InterlacingArray::empty(n);
        for (std::size_t i = 0; i < t.events.size(); ++i) {
          const auto& e = t.events[i];
          arr.add_box_unchecked(e.level, e.row);
          const bool group_end = i + 1 == t.events.size() || t.events[i + 1].time != e.time;
          if (i + 1 < t.events.size() && t.events[i + 1].time == e.time) {
            EXPECT_TRUE(t.events[i + 1].pushed);
            EXPECT_EQ(t.events[i + 1].level, e.level + 1);
            EXPECT_EQ(t.events[i + 1].row, e.row);
          }
          if (group_end) ASSERT_TRUE(arr.valid()) << "N=" << n << " event " << i;
        }
        EXPECT_EQ(arr, std::get<InterlacingArray>(t.final_state));
        EXPECT_EQ(t.event_count, t.events.size());
      }
    }
  }
}

TEST(RunMulti, FirstLevelJumpFromEmptyPushesSecondLevel) {
  const auto t = run_multi(multi_cfg(2, 1.3, 50.0, 4));
  bool saw_push = false;
  for (std::size_t i = 0; i < t.events.size(); ++i) {
    if (t.events[i].level == 1 && t.events[i].row == 1 && i == 0) {
      ASSERT_GT(t.events.size(), 1u);
      EXPECT_TRUE(t.events[1].pushed);
      EXPECT_EQ(t.events[1].level, 2);
      EXPECT_EQ(t.events[1].time, t.events[0].time);
    }
    saw_push = saw_push || t.events[i].pushed;
  }
  EXPECT_TRUE(saw_push);
}

TEST(RunMulti, LevelSizesArePoisson) {
  std::vector<double> top, bottom;
  for (const auto& t : batch(multi_cfg(2, 1.0, 5.0, 77), 10000)) {
    const auto& a = std::get<InterlacingArray>(t.final_state);
    top.push_back(a.level(2).size());
    bottom.push_back(a.level(1).size());
  }
  EXPECT_NEAR(mean_of(top), 10.0, 3 * std::sqrt(10.0 / 10000));
  EXPECT_NEAR(mean_of(bottom), 5.0, 3 * std::sqrt(5.0 / 10000));
  EXPECT_NEAR(var_of(top) / mean_of(top), 1.0, 0.1);
}

TEST(RunMulti, TopLevelFirstRowMatchesSingleLevelChain) {
  std::vector<double> a, b;
  for (const auto& t : batch(multi_cfg(3, 1.0, 4.0, 5), 8000))
    a.push_back(std::get<InterlacingArray>(t.final_state).level(3).row(1));
  for (const auto& t : batch(single_cfg(3, 1.0, 4.0, 6), 8000)) b.push_back(std::get<Partition>(t.final_state).row(1));
  const double se = std::sqrt(var_of(a) / a.size() + var_of(b) / b.size());
  EXPECT_NEAR(mean_of(a), mean_of(b), 3.5 * se);
}

TEST(JackGibbs, EnumerationSumsToOneAndSamplerMatches) {
  const auto table = enumerate_jack_gibbs(Partition{2, 1}, 3, Theta(1.5));
  double total = 0.0;
  for (const auto& w : table) total += w.weight;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(enumerate_jack_gibbs(Partition{2}, 1, Theta(1.0)).size(), 1u);

  Rng rng(3);
  std::map<std::string, double> counts;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) counts[format_array(sample_jack_gibbs(table, rng))] += 1;
  for (const auto& w : table) {
    const double e = w.weight * draws;
    EXPECT_NEAR(counts[format_array(w.array)], e, 4.5 * std::sqrt(e));
  }
}

TEST(JackGibbs, PropagatesUnderTheMultilevelChain) {
  const int n = 3;
  const Theta th(1.5);
  const Partition start_top{2, 1};
  const auto table = enumerate_jack_gibbs(start_top, n, th);
  Rng rng(11);
  std::map<Partition, std::map<std::string, double>> by_top;
  const std::size_t paths = 40000;
  for (std::size_t p = 0; p < paths; ++p) {
    ChainConfig c = multi_cfg(n, th.value(), 0.6, child_seed(99, p));
    c.initial = sample_jack_gibbs(table, rng);
    c.record_events = false;
    const auto traj = run_multi(c);
    const auto& a = std::get<InterlacingArray>(traj.final_state);
    by_top[a.level(n)][format_array(a)] += 1;
  }
  int tested = 0;
  for (const auto& [top, counts] : by_top) {
    double m = 0.0;
    for (const auto& kv : counts) m += kv.second;
    if (m < 1000) continue;
    const auto expected = enumerate_jack_gibbs(top, n, th);
    double chi2 = 0.0;
    int cells = 0;
    for (const auto& w : expected) {
      const double e = w.weight * m;
      const auto it = counts.find(format_array(w.array));
      const double o = it == counts.end() ? 0.0 : it->second;
      chi2 += (o - e) * (o - e) / e;
      ++cells;
    }
    // Loose cap: the 0.9999 quantile of χ² with cells−1 ≤ 20 degrees of freedom is below 4·(cells−1)+20.
    EXPECT_LT(chi2, 4.0 * (cells - 1) + 20.0) << format_partition(top);
    ++tested;
  }
  EXPECT_GE(tested, 3);
}

TEST(Batch, DeterministicAcrossWorkersAndMatchesDerivedSeed) {
  const auto c = multi_cfg(3, 0.8, 20.0, 1234);
  const auto a = batch(c, 16, 1);
  const auto b = batch(c, 16, 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].events, b[i].events);
    EXPECT_EQ(a[i].final_state, b[i].final_state);
  }
  ChainConfig one = c;
  one.seed = child_seed(1234, 0);
  EXPECT_EQ(run_multi(one).events, a[0].events);
}

TEST(SnapshotRescaled, WorkedExamples) {
  const auto t0 = run_single(single_cfg(2, 1.0, 0.0, 1));
  const auto z = std::get<WeylPoint>(snapshot_rescaled(t0, ScalingParams(0.5, 0.0, 1.0), 0.0));
  EXPECT_EQ(z.coords, (std::vector<double>{0.0, 0.0}));
  auto c = single_cfg(2, 1.0, 0.0, 1);
  c.initial = Partition{3, 1};
  const auto y = std::get<WeylPoint>(snapshot_rescaled(run_single(c), ScalingParams(0.01, 0.02, 1.0), 0.0));
  EXPECT_NEAR(y.coords[0], -0.1, 1e-12);
  EXPECT_NEAR(y.coords[1], 0.1, 1e-12);
  const auto m = run_multi(multi_cfg(4, 1.0, 200.0, 8));
  for (double s : {0.0, 50.0, 200.0}) {
    const auto cp = std::get<ConePoint>(snapshot_rescaled(m, ScalingParams(0.01, 0.01 * s, 1.0), s));
    EXPECT_TRUE(cp.valid());
  }
}
