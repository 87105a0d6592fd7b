#include "jackflow/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <stdexcept>

#include "jackflow/ctmc.hpp"
#include "jackflow/diffusion.hpp"
#include "jackflow/ensembles.hpp"
#include "jackflow/jack.hpp"
#include "jackflow/parallel.hpp"
#include "jackflow/rng.hpp"

namespace jackflow::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double rel_err(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

TestReport bound_report(std::string name, double statistic, double threshold, std::size_t n, double runtime) {
  TestReport r;
  r.name = std::move(name);
  r.statistic = statistic;
  r.threshold = threshold;
  r.pass = statistic <= threshold;
  r.n_samples = n;
  r.runtime_s = runtime;
  r.acceptance = true;
  return r;
}

TestReport ks_report(std::string name, std::span<const double> a, std::span<const double> b, double d_ceiling,
                     std::optional<double> p_floor, double runtime) {
  const auto ks = ks_two_sample(a, b);
  TestReport r = bound_report(std::move(name), ks.d, d_ceiling, std::min(a.size(), b.size()), runtime);
  r.p_value = ks.p;
  if (p_floor) r.pass = r.pass && ks.p >= *p_floor;
  return r;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

double std_error(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  const double n = static_cast<double>(v.size());
  return std::sqrt(s / (n - 1.0) / n);
}

std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t j) {
  std::vector<double> c;
  c.reserve(rows.size());
  for (const auto& r : rows) c.push_back(r[j]);
  return c;
}

// 1. Σ over addable cells of the one-level rates equals Nθ.
CriterionResult total_rate(std::uint64_t seed) {
  CriterionResult out{1, "total-rate identity", false, "", 0.0, 1.0, {}};
  const auto start = Clock::now();
  Rng rng(seed);
  const double thetas[] = {0.5, 1.0, 2.0, 2.5};
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const int n = std::uniform_int_distribution<int>(1, 6)(rng);
    const double th = thetas[std::uniform_int_distribution<int>(0, 3)(rng)];
    const int m = std::uniform_int_distribution<int>(0, 30)(rng);
    const auto all = partitions_of(m, n);
    const auto& lam = all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
    double total = 0.0;
    for (const auto& c : addable_cells(lam, n)) total += single_level_rate(lam, c, n, Theta(th));
    worst = std::max(worst, rel_err(total, n * th));
  }
  out.runtime_s = seconds_since(start);
  out.reports.push_back(bound_report("total rate relative error", worst, 1e-9, 200, out.runtime_s));
  out.pass = out.reports.back().pass && out.runtime_s < out.budget_s;
  out.detail = "max rel err " + fmt("%.2e", worst) + " over 200 partitions (<= 1e-9)";
  return out;
}

// 2. J_λ(1^N) = Σ_{μ≺λ} ψ_{λ/μ} J_μ(1^{N−1}).
CriterionResult branching() {
  CriterionResult out{2, "branching recursion", false, "", 0.0, 10.0, {}};
  const auto start = Clock::now();
  double worst = 0.0;
  std::size_t count = 0;
  for (double t : {0.5, 1.0, 2.0}) {
    const Theta th(t);
    for (int m = 0; m <= 8; ++m) {
      for (int n = 1; n <= 5; ++n) {
        for (const auto& lam : partitions_of(m, m)) {
          double sum = 0.0;
          for (const auto& mu : interlacing_predecessors(lam)) {
            const double lower = n == 1 ? (mu.empty() ? 1.0 : 0.0) : jack_principal(mu, n - 1, th).value();
            sum += psi(lam, mu, th).value() * lower;
          }
          worst = std::max(worst, rel_err(sum, jack_principal(lam, n, th).value()));
          ++count;
        }
      }
    }
  }
  out.runtime_s = seconds_since(start);
  out.reports.push_back(bound_report("branching relative error", worst, 1e-10, count, out.runtime_s));
  out.pass = out.reports.back().pass && out.runtime_s < out.budget_s;
  out.detail = "max rel err " + fmt("%.2e", worst) + " over " + std::to_string(count) + " cases (<= 1e-10)";
  return out;
}

// 3. Layers of the Jack measure are Poisson(Nθs).
CriterionResult poisson_layers() {
  CriterionResult out{3, "Jack measure Poisson layering", false, "", 0.0, 5.0, {}};
  const auto start = Clock::now();
  double worst = 0.0;
  std::size_t count = 0;
  for (double t : {0.5, 1.0, 2.0}) {
    const Theta th(t);
    for (int n = 1; n <= 3; ++n) {
      for (double s : {0.5, 2.0}) {
        for (int m = 0; m <= 10; ++m) {
          double layer = 0.0;
          for (const auto& lam : partitions_of(m, n)) layer += jack_measure_log(lam, n, s, th).value();
          const double pois = std::exp(-n * t * s + m * std::log(n * t * s) - std::lgamma(m + 1.0));
          worst = std::max(worst, rel_err(layer, pois));
          ++count;
        }
      }
    }
  }
  out.runtime_s = seconds_since(start);
  out.reports.push_back(bound_report("layer relative error", worst, 1e-9, count, out.runtime_s));
  out.pass = out.reports.back().pass && out.runtime_s < out.budget_s;
  out.detail = "max rel err " + fmt("%.2e", worst) + " over " + std::to_string(count) + " layers (<= 1e-9)";
  return out;
}

// 4. Dixon–Anderson integral, one and two integration variables.
CriterionResult dixon_anderson(std::uint64_t seed) {
  CriterionResult out{4, "Dixon-Anderson integral", false, "", 0.0, 30.0, {}};
  const auto start = Clock::now();
  Rng rng(seed);
  std::normal_distribution<double> z;
  double worst1 = 0.0, worst2 = 0.0;
  std::size_t count = 0;
  for (double t : {0.5, 1.0, 1.5, 2.0}) {
    for (int rep = 0; rep < 4; ++rep) {
      for (int m = 1; m <= 2; ++m) {
        std::vector<double> v(static_cast<std::size_t>(m + 1));
        for (auto& x : v) x = 1.5 * z(rng);
        std::sort(v.begin(), v.end());
        for (std::size_t i = 1; i < v.size(); ++i) v[i] = std::max(v[i], v[i - 1] + 0.05);
        const auto da = dixon_anderson_check(v, Theta(t));
        (m == 1 ? worst1 : worst2) = std::max(m == 1 ? worst1 : worst2, rel_err(da.lhs, da.rhs));
        ++count;
      }
    }
  }
  out.runtime_s = seconds_since(start);
  out.reports.push_back(bound_report("Dixon-Anderson m=1 relative error", worst1, 1e-6, count / 2, out.runtime_s));
  out.reports.push_back(bound_report("Dixon-Anderson m=2 relative error", worst2, 1e-5, count / 2, out.runtime_s));
  out.pass = out.reports[0].pass && out.reports[1].pass && out.runtime_s < out.budget_s;
  out.detail = "m=1 max rel err " + fmt("%.2e", worst1) + " (<= 1e-6), m=2 " + fmt("%.2e", worst2) + " (<= 1e-5)";
  return out;
}

// 5. Rescaled rates = ε⁻¹ + ε^{−1/2} b + O(1).
CriterionResult rate_expansion() {
  CriterionResult out{5, "rate expansion", false, "", 0.0, 5.0, {}};
  const auto start = Clock::now();
  const std::vector<double> eps{1e-2, 1e-4, 1e-6};
  const std::vector<WeylPoint> singles{WeylPoint{{0.3}}, WeylPoint{{-1.0, 1.0}}, WeylPoint{{-1.3, -0.2, 0.4, 1.5}}};
  const std::vector<ConePoint> cones{ConePoint{{{0.1}, {-1.0, 1.0}}},
                                     ConePoint{{{0.2}, {-0.5, 0.9}, {-1.2, 0.3, 1.4}}}};
  double worst = 0.0;
  out.pass = true;
  for (double t : {0.5, 1.0, 2.0, 3.0}) {
    for (const auto& y : singles) {
      const auto p = rate_expansion_probe(y, Theta(t), eps);
      worst = std::max(worst, p.max_growth);
      out.reports.push_back(bound_report("single N=" + std::to_string(y.coords.size()) + " theta=" + fmt("%g", t),
                                         p.max_growth, 2.0, eps.size(), 0.0));
      out.pass = out.pass && p.pass;
    }
    for (const auto& y : cones) {
      const auto p = rate_expansion_probe(y, Theta(t), eps);
      worst = std::max(worst, p.max_growth);
      out.reports.push_back(bound_report("multi N=" + std::to_string(y.depth()) + " theta=" + fmt("%g", t),
                                         p.max_growth, 2.0, eps.size(), 0.0));
      out.pass = out.pass && p.pass;
    }
  }
  out.runtime_s = seconds_since(start);
  for (auto& r : out.reports) r.runtime_s = out.runtime_s;
  out.pass = out.pass && out.runtime_s < out.budget_s;
  out.detail = "worst decade growth " + fmt("%.3f", worst) + " over " + std::to_string(out.reports.size()) +
               " probes (<= 2)";
  return out;
}

constexpr double kEps = 2.5e-4;
constexpr std::size_t kChainPaths = 5000;

// 6. Rescaled one-level chain at t = 1 vs Hermite β = 2.
CriterionResult fixed_time(std::uint64_t seed, int workers) {
  CriterionResult out{6, "fixed-time convergence", false, "", 0.0, 0.0, {}};
  const auto start = Clock::now();
  const int n = 3;
  const Theta th(1.0);
  const double t = 1.0;
  const ScalingParams sp(kEps, t, th.value());
  ChainConfig cfg;
  cfg.n = n;
  cfg.theta = th;
  cfg.horizon_s = sp.chain_time();
  cfg.seed = child_seed(seed, 1);
  cfg.record_events = false;
  const auto trajs = batch(cfg, kChainPaths, workers);
  std::vector<std::vector<double>> chain;
  for (const auto& tr : trajs) chain.push_back(std::get<WeylPoint>(rescale_state(tr.final_state, sp, n)).coords);
  const auto herm = sample_hermite(EnsembleParams(n, th, t), kChainPaths, child_seed(seed, 2), {}, workers);
  std::vector<std::vector<double>> ref;
  for (const auto& w : herm.samples) ref.push_back(w.coords);
  const double floor = bonferroni(0.01, n);
  const double elapsed = seconds_since(start);
  out.pass = true;
  double worst_d = 0.0, worst_p = 1.0;
  for (int i = 0; i < n; ++i) {
    const auto a = column(chain, static_cast<std::size_t>(i)), b = column(ref, static_cast<std::size_t>(i));
    out.reports.push_back(ks_report("chain vs Hermite coord " + std::to_string(i + 1), a, b, 0.05, floor, elapsed));
    out.pass = out.pass && out.reports.back().pass;
    worst_d = std::max(worst_d, out.reports.back().statistic);
    worst_p = std::min(worst_p, *out.reports.back().p_value);
  }
  out.runtime_s = seconds_since(start);
  out.detail = "max KS D " + fmt("%.4f", worst_d) + " (<= 0.05), min p " + fmt("%.3g", worst_p) + " (>= " +
               fmt("%.4f", floor) + "), MCMC tau " + fmt("%.2f", herm.diagnostics.autocorr_time);
  return out;
}

// 7. Rescaled multilevel chain at t = 1 vs the corners process, plus the conditional of y¹ given y².
CriterionResult corners_law(std::uint64_t seed, int workers) {
  CriterionResult out{7, "multilevel law is the corners process", false, "", 0.0, 0.0, {}};
  const auto start = Clock::now();
  const int n = 2;
  const double t = 1.0;
  const double floor = bonferroni(0.01, 6);
  out.pass = true;
  double worst_d = 0.0, worst_p = 1.0, worst_chi = 1.0;
  for (double thv : {1.0, 2.0}) {
    const Theta th(thv);
    const ScalingParams sp(kEps, t, thv);
    ChainConfig cfg;
    cfg.n = n;
    cfg.theta = th;
    cfg.horizon_s = sp.chain_time();
    cfg.seed = child_seed(seed, static_cast<std::uint64_t>(10 * thv));
    cfg.initial = InterlacingArray::empty(n);
    cfg.record_events = false;
    const auto trajs = batch(cfg, kChainPaths, workers);
    std::vector<std::vector<double>> chain;
    for (const auto& tr : trajs) chain.push_back(std::get<ConePoint>(rescale_state(tr.final_state, sp, n)).flatten());
    const auto corners =
        sample_corners(EnsembleParams(n, th, t), kChainPaths, child_seed(seed, static_cast<std::uint64_t>(20 * thv)), {}, workers);
    std::vector<std::vector<double>> ref;
    for (const auto& c : corners.samples) ref.push_back(c.flatten());
    const double elapsed = seconds_since(start);
    const char* names[] = {"y1", "y2_1", "y2_2"};
    for (std::size_t j = 0; j < 3; ++j) {
      const auto a = column(chain, j), b = column(ref, j);
      out.reports.push_back(ks_report("theta=" + fmt("%g", thv) + " " + names[j] + " chain vs corners", a, b, 0.05,
                                      floor, elapsed));
      out.pass = out.pass && out.reports.back().pass;
      worst_d = std::max(worst_d, out.reports.back().statistic);
      worst_p = std::min(worst_p, *out.reports.back().p_value);
    }
    // Position of y¹ inside (y²_1, y²_2) is Beta(θ, θ) whatever y² is; test it
    // separately on the two halves of the y²-gap distribution.
    std::vector<double> gaps;
    for (const auto& c : chain) gaps.push_back(c[2] - c[1]);
    std::vector<double> sorted = gaps;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
    const double median = sorted[sorted.size() / 2];
    std::vector<double> edges;
    for (int k = 0; k <= 10; ++k) edges.push_back(k / 10.0);
    const auto log_beta = [thv](double w) {
      return std::lgamma(2 * thv) - 2 * std::lgamma(thv) + (thv - 1) * (std::log(w) + std::log1p(-w));
    };
    double stat = 0.0;
    int dof = 0;
    for (int half = 0; half < 2; ++half) {
      std::vector<double> w;
      for (std::size_t s = 0; s < chain.size(); ++s)
        if ((gaps[s] <= median) == (half == 0)) w.push_back((chain[s][0] - chain[s][1]) / gaps[s]);
      const auto chi = chi2_histogram(w, log_beta, edges);
      stat += chi.statistic;
      dof += chi.dof;
    }
    const double p = chi2_sf(stat, dof);
    TestReport r = bound_report("theta=" + fmt("%g", thv) + " conditional y1 | y2-bin chi2", stat, 0.0, chain.size(), elapsed);
    r.p_value = p;
    r.threshold = 0.01;
    r.pass = p > 0.01;
    out.reports.push_back(r);
    out.pass = out.pass && r.pass;
    worst_chi = std::min(worst_chi, p);
  }
  out.runtime_s = seconds_since(start);
  out.detail = "max KS D " + fmt("%.4f", worst_d) + " (<= 0.05), min KS p " + fmt("%.3g", worst_p) + " (>= " +
               fmt("%.4f", floor) + "), min conditional chi2 p " + fmt("%.3g", worst_chi) + " (> 0.01)";
  return out;
}

// 8. E Σ x_i²(t) = (N + βN(N−1)/2) t for Dyson BM from the origin.
CriterionResult dyson_moments(std::uint64_t seed, int workers) {
  CriterionResult out{8, "Dyson integrator moments", false, "", 0.0, 120.0, {}};
  const auto start = Clock::now();
  const int n = 3;
  out.pass = true;
  std::string detail;
  for (double beta : {1.0, 2.0, 4.0}) {
    SdeConfig cfg;
    cfg.n = n;
    cfg.theta = Theta::from_beta(beta);
    cfg.t_end = 1.0;
    cfg.dt = 1e-3;
    cfg.seed = child_seed(seed, static_cast<std::uint64_t>(beta));
    cfg.initial = WeylPoint{std::vector<double>(n, 0.0)};
    const auto paths = sde_batch(cfg, 10000, false, workers);
    std::vector<double> m2;
    for (const auto& p : paths) {
      double s = 0.0;
      for (double x : p.final_state) s += x * x;
      m2.push_back(s);
    }
    const double expect = (n + beta * n * (n - 1) / 2.0) * cfg.t_end;
    const double z = std::abs(mean(m2) - expect) / std_error(m2);
    out.reports.push_back(bound_report("beta=" + fmt("%g", beta) + " second moment |z|", z, 3.0, m2.size(),
                                       seconds_since(start)));
    out.pass = out.pass && out.reports.back().pass;
    detail += (detail.empty() ? "" : ", ") + std::string("beta=") + fmt("%g", beta) + ": " + fmt("%.4f", mean(m2)) +
              " vs " + fmt("%g", expect) + " (|z|=" + fmt("%.2f", z) + ")";
  }
  out.runtime_s = seconds_since(start);
  out.pass = out.pass && out.runtime_s < out.budget_s;
  out.detail = detail + ", |z| <= 3";
  return out;
}

// 9. Multilevel SDE at θ = 2 from a corners start.
CriterionResult multilevel_sde(std::uint64_t seed, int workers) {
  CriterionResult out{9, "multilevel SDE invariants at theta=2", false, "", 0.0, 300.0, {}};
  const auto start = Clock::now();
  const int n = 3;
  const Theta th(2.0);
  const std::size_t paths = 1000;
  std::vector<SdePath> res(paths);
  std::vector<double> incr(paths);
  parallel_for(paths, resolve_workers(workers), [&](std::size_t s) {
    Rng rng = make_rng(child_seed(seed, 9), s);
    const auto top = sample_hermite_tridiagonal(EnsembleParams(n, th, 1.0), rng);
    const auto y0 = sample_corners_given_top(top, th, rng);
    SdeConfig cfg;
    cfg.n = n;
    cfg.theta = th;
    cfg.t_end = 0.5;
    cfg.dt = 1e-3;
    cfg.delta_stop = 1e-4;
    cfg.seed = child_seed(seed ^ 0x9, s);
    cfg.initial = y0;
    res[s] = integrate_multilevel(cfg);
    double before = 0.0, after = 0.0;
    for (double v : y0.levels.back()) before += v * v;
    for (std::size_t j = 3; j < 6; ++j) after += res[s].final_state[j] * res[s].final_state[j];
    incr[s] = after - before;
  });
  std::size_t held = 0, hits = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  for (const auto& p : res) {
    held += p.constraint_held;
    hits += p.stopping.hat_tau_delta.has_value();
    min_gap = std::min(min_gap, p.stopping.min_gap_seen);
  }
  const double elapsed = seconds_since(start);
  const double z = std::abs(mean(incr) - 7.5) / std_error(incr);
  out.reports.push_back(bound_report("paths leaving the cone", static_cast<double>(paths - held), 0.0, paths, elapsed));
  out.reports.push_back(bound_report("paths hitting hat-tau_1e-4", static_cast<double>(hits), 0.0, paths, elapsed));
  out.reports.push_back(bound_report("level-3 second-moment increment |z|", z, 3.0, paths, elapsed));
  out.runtime_s = seconds_since(start);
  out.pass = out.reports[0].pass && out.reports[1].pass && out.reports[2].pass && out.runtime_s < out.budget_s;
  out.detail = "cone held on " + std::to_string(held) + "/" + std::to_string(paths) + ", hat-tau_1e-4 hit on " +
               std::to_string(hits) + "/" + std::to_string(paths) + " (need 0), min gap " + fmt("%.2e", min_gap) +
               ", increment " + fmt("%.4f", mean(incr)) + " vs 7.5 (|z|=" + fmt("%.2f", z) + ")";
  return out;
}

// 10. Intertwining of the Dyson semigroups through the link.
CriterionResult intertwining(std::uint64_t seed, int workers) {
  CriterionResult out{10, "intertwining", false, "", 0.0, 300.0, {}};
  const auto start = Clock::now();
  out.pass = true;
  double worst = 0.0;
  for (int n : {2, 3}) {
    for (double t : {0.25, 0.5}) {
      IntertwiningOptions o;
      o.n = n;
      o.theta = Theta(1.0);
      o.t = t;
      o.samples = 10000;
      o.seed = child_seed(seed, static_cast<std::uint64_t>(100 * n + 4 * t));
      o.workers = workers;
      const auto r = intertwining_test(o);
      for (auto c : r.coordinates) {
        c.acceptance = true;
        worst = std::max(worst, c.statistic);
        out.reports.push_back(c);
      }
      out.pass = out.pass && r.pass;
    }
  }
  out.runtime_s = seconds_since(start);
  out.pass = out.pass && out.runtime_s < out.budget_s;
  out.detail = "max KS D " + fmt("%.4f", worst) + " over " + std::to_string(out.reports.size()) +
               " coordinates (<= 0.05)";
  return out;
}

// 11. Top level of the multilevel chain from a Jack–Gibbs start vs the one-level chain.
CriterionResult level_restriction(std::uint64_t seed, int workers) {
  CriterionResult out{11, "level restriction", false, "", 0.0, 0.0, {}};
  const auto start = Clock::now();
  const int n = 3;
  const Theta th(1.0);
  const Partition top{6, 3, 1};
  const auto table = enumerate_jack_gibbs(top, n, th);
  const std::vector<double> times{2.0, 5.0, 10.0};
  std::vector<Trajectory> multi(kChainPaths);
  parallel_for(kChainPaths, resolve_workers(workers), [&](std::size_t s) {
    Rng rng = make_rng(child_seed(seed, 11), s);
    ChainConfig cfg;
    cfg.n = n;
    cfg.theta = th;
    cfg.horizon_s = times.back();
    cfg.seed = child_seed(seed ^ 0xB, s);
    cfg.initial = sample_jack_gibbs(table, rng);
    cfg.snapshot_times = times;
    cfg.record_events = false;
    multi[s] = run_multi(cfg);
  });
  ChainConfig single;
  single.n = n;
  single.theta = th;
  single.horizon_s = times.back();
  single.seed = child_seed(seed, 12);
  single.initial = top;
  single.snapshot_times = times;
  single.record_events = false;
  const auto one = batch(single, kChainPaths, workers);
  const double elapsed = seconds_since(start);
  out.pass = true;
  double worst = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    for (std::size_t row = 1; row <= static_cast<std::size_t>(n); ++row) {
      std::vector<double> a, b;
      for (const auto& tr : multi) a.push_back(std::get<InterlacingArray>(tr.snapshots[k]).level(n).row(row));
      for (const auto& tr : one) b.push_back(std::get<Partition>(tr.snapshots[k]).row(row));
      out.reports.push_back(ks_report("s=" + fmt("%g", times[k]) + " row " + std::to_string(row), a, b, 0.05,
                                      std::nullopt, elapsed));
      out.pass = out.pass && out.reports.back().pass;
      worst = std::max(worst, out.reports.back().statistic);
    }
  }
  out.runtime_s = seconds_since(start);
  out.detail = "max KS D " + fmt("%.4f", worst) + " over " + std::to_string(out.reports.size()) +
               " row/time pairs (<= 0.05)";
  return out;
}

}  // namespace

CriterionResult run(int id, std::uint64_t seed, int workers) {
  const std::uint64_t s = child_seed(seed, static_cast<std::uint64_t>(id));
  switch (id) {
    case 1: return total_rate(s);
    case 2: return branching();
    case 3: return poisson_layers();
    case 4: return dixon_anderson(s);
    case 5: return rate_expansion();
    case 6: return fixed_time(s, workers);
    case 7: return corners_law(s, workers);
    case 8: return dyson_moments(s, workers);
    case 9: return multilevel_sde(s, workers);
    case 10: return intertwining(s, workers);
    case 11: return level_restriction(s, workers);
    default: throw std::invalid_argument("no acceptance criterion " + std::to_string(id));
  }
}

std::vector<int> suite(std::string_view name) {
  if (name == "identities") return {1, 2, 3, 4};
  if (name == "rates") return {5};
  if (name == "convergence") return {6, 7, 11};
  if (name == "intertwining") return {10};
  if (name == "sde") return {8, 9};
  if (name == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  throw std::invalid_argument("unknown suite '" + std::string(name) +
                              "' (identities | rates | convergence | intertwining | sde | all)");
}

std::string summary_line(const CriterionResult& r) {
  std::string line = std::string(r.pass ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.title + ": " +
                     r.detail + " (" + fmt("%.1f", r.runtime_s) + " s";
  if (r.budget_s > 0.0) line += ", budget " + fmt("%g", r.budget_s) + " s";
  return line + ")";
}

}  // namespace jackflow::acceptance
